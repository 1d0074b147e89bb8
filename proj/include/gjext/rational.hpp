#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "gjext/errors.hpp"

namespace gjext {

using Int = mpz_class;

/// Exact rational scalar backed by arbitrary-precision integers.
///
/// Invariants: always in lowest terms with positive denominator; every
/// operation is exact. All scalar quantities in this library (function
/// values, tolerances, gauge coefficients) are Rationals; nothing is
/// ever rounded. Doubles appear only as display output and as one-sided
/// search filters that are re-checked exactly.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(int n) : q_(n) {}
  Rational(long n) : q_(static_cast<signed long>(n)) {}
  Rational(long n, long d) : q_(n, d) { canonicalize_checked(); }
  Rational(const Int& n, const Int& d) : q_(n, d) { canonicalize_checked(); }
  explicit Rational(const Int& n) : q_(n) {}

  /// Parses "p/q" or "p" with optional leading '-'. No whitespace, no
  /// floating point.
  static Rational parse(std::string_view text);

  /// Formats as "p/q", or "p" when the denominator is 1.
  std::string str() const;

  Int num() const { return q_.get_num(); }
  Int den() const { return q_.get_den(); }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }

  /// Largest integer <= *this.
  Int floor() const;
  /// Smallest integer >= *this.
  Int ceil() const;
  /// *this - floor(*this), in [0,1).
  Rational frac() const;

  Rational abs() const { return Rational(mpq_class(::abs(q_))); }

  /// Nearest double; for display and for one-sided filters only.
  double to_double() const { return q_.get_d(); }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ + b.q_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ - b.q_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ * b.q_)); }
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(mpq_class(-q_)); }

  Rational& operator+=(const Rational& b) { q_ += b.q_; return *this; }
  Rational& operator-=(const Rational& b) { q_ -= b.q_; return *this; }
  Rational& operator*=(const Rational& b) { q_ *= b.q_; return *this; }
  Rational& operator/=(const Rational& b) { *this = *this / b; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.q_.get_mpq_t(), b.q_.get_mpq_t()) != 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) >= 0; }

  const mpq_class& raw() const { return q_; }

 private:
  explicit Rational(mpq_class q) : q_(std::move(q)) {}
  void canonicalize_checked();

  mpq_class q_;
};

inline Rational min(const Rational& a, const Rational& b) { return a <= b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a >= b ? a : b; }

/// 1/p for integer p >= 1.
Rational unit_fraction(const Int& p);

/// The p with delta == 1/p; throws ConstructionError when delta is not the
/// reciprocal of a positive integer.
Int unit_fraction_den(const Rational& delta);

}  // namespace gjext
