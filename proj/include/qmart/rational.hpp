#ifndef QMART_RATIONAL_HPP
#define QMART_RATIONAL_HPP

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

#include "qmart/errors.hpp"

namespace qmart {

/// Arbitrary-precision rational, always kept canonical: lowest terms,
/// positive denominator. All arithmetic is exact.
///
/// Text form is "-3/4", "7", "0": optional minus, decimal numerator,
/// optional "/" and positive decimal denominator. Output is always in
/// lowest terms with "/" only when the denominator exceeds 1; inputs
/// need not be reduced.
class Rat {
public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {} // NOLINT: implicit by design, mirrors integer literals
  Rat(long n, long d) {
    if (d == 0) throw Error("zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
  }
  explicit Rat(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Strict parse of the rational-string grammar. Throws ParseError on
  /// anything else, including "1/0".
  static Rat parse(std::string_view text);

  std::string str() const;

  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }

  Rat abs() const { return Rat(mpq_class(::abs(v_))); }
  /// max(x, 0)
  Rat pos_part() const { return sign() > 0 ? *this : Rat(); }
  /// max(-x, 0)
  Rat neg_part() const { return sign() < 0 ? -*this : Rat(); }

  friend Rat operator-(const Rat& x) { return Rat(mpq_class(-x.v_)); }
  friend Rat operator+(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ + b.v_)); }
  friend Rat operator-(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ - b.v_)); }
  friend Rat operator*(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ * b.v_)); }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.is_zero()) throw Error("division by zero");
    return Rat(mpq_class(a.v_ / b.v_));
  }

  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  friend bool operator==(const Rat& a, const Rat& b) { return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    const int c = mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t());
    return c <=> 0;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& x);

private:
  mpq_class v_;
};

inline Rat abs(const Rat& x) { return x.abs(); }

} // namespace qmart

#endif
