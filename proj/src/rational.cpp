#include "qmart/rational.hpp"

#include <cctype>
#include <ostream>

namespace qmart {

Rat Rat::parse(std::string_view text) {
  const auto bad = [&](const char* why) {
    return ParseError(std::string(why) + " in '" + std::string(text) + "'");
  };

  std::size_t i = 0;
  if (i < text.size() && text[i] == '-') ++i;
  const std::size_t num_begin = i;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == num_begin) throw bad("missing numerator");

  std::size_t den_begin = std::string_view::npos;
  if (i < text.size() && text[i] == '/') {
    den_begin = ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == den_begin) throw bad("missing denominator");
  }
  if (i != text.size()) throw bad("invalid rational");

  mpq_class v;
  if (v.set_str(std::string(text), 10) != 0) throw bad("invalid rational");
  if (den_begin != std::string_view::npos) {
    const std::string_view den = text.substr(den_begin);
    if (den.find_first_not_of('0') == std::string_view::npos) throw bad("zero denominator");
  }
  v.canonicalize();
  return Rat(std::move(v));
}

std::string Rat::str() const { return v_.get_str(); }

std::ostream& operator<<(std::ostream& os, const Rat& x) { return os << x.v_; }

} // namespace qmart
