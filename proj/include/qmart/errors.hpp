#ifndef QMART_ERRORS_HPP
#define QMART_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace qmart {

/// Base error for precondition and usage failures.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input text (bad rational string, bad JSON shape).
class ParseError : public Error {
public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

/// Structurally well-formed input that violates a model invariant.
/// Carries the full list of violations, one message each.
class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "validation failed:";
    for (const auto& m : v) {
      s += "\n  - " + m;
    }
    return s;
  }

  std::vector<std::string> violations_;
};

} // namespace qmart

#endif
