#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <utility>

namespace poolshare {

// Exact rational scalar. Every quantity the engine computes stays in Num;
// nothing rounds before output. Conversion to double exists only for the
// metrics/CSV display boundary and is lossy by design.
//
// Invariant: the wrapped value is always in canonical reduced form with a
// positive denominator, so operator== is decidable value equality.
class Num {
 public:
  Num() : v_(0) {}
  Num(int n) : v_(n) {}
  Num(long n) : v_(static_cast<signed long>(n)) {}
  Num(long num, long den);
  explicit Num(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  // Accepts "p/q", integer ("-3"), and plain decimal ("1.5", "-.25") forms.
  // Throws std::invalid_argument on anything else (including exponents).
  static Num parse(const std::string& text);

  Num operator-() const { return raw(-v_); }
  Num& operator+=(const Num& o) { v_ += o.v_; return *this; }
  Num& operator-=(const Num& o) { v_ -= o.v_; return *this; }
  Num& operator*=(const Num& o) { v_ *= o.v_; return *this; }
  Num& operator/=(const Num& o);

  friend Num operator+(Num a, const Num& b) { return a += b; }
  friend Num operator-(Num a, const Num& b) { return a -= b; }
  friend Num operator*(Num a, const Num& b) { return a *= b; }
  friend Num operator/(Num a, const Num& b) { return a /= b; }

  friend bool operator==(const Num& a, const Num& b) { return cmp(a.v_, b.v_) == 0; }
  friend bool operator!=(const Num& a, const Num& b) { return cmp(a.v_, b.v_) != 0; }
  friend bool operator<(const Num& a, const Num& b) { return cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const Num& a, const Num& b) { return cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const Num& a, const Num& b) { return cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const Num& a, const Num& b) { return cmp(a.v_, b.v_) >= 0; }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_negative() const { return sgn(v_) < 0; }
  bool is_positive() const { return sgn(v_) > 0; }

  Num abs() const { return raw(::abs(v_)); }

  // Lossy: nearest-double conversion for display only.
  double to_double() const { return v_.get_d(); }

  // Canonical exact form: "p/q", or "p" when the denominator is 1.
  std::string to_string() const { return v_.get_str(); }

  // Display form with the given number of significant digits (%.*g on the
  // double conversion). Lossy; used for CSV output.
  std::string to_decimal(int significant_digits = 12) const;

  const mpq_class& value() const { return v_; }

 private:
  // Internal results of mpq arithmetic are already canonical; skip the gcd.
  static Num raw(mpq_class v) {
    Num n;
    n.v_ = std::move(v);
    return n;
  }

  mpq_class v_;
};

inline Num min(const Num& a, const Num& b) { return a < b ? a : b; }
inline Num max(const Num& a, const Num& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const Num& n);

}  // namespace poolshare
