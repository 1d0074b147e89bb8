#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "gjext/rational.hpp"

namespace gjext {

/// Exact rational vector; the length is the ambient dimension n.
class RatVec {
 public:
  RatVec() = default;
  explicit RatVec(int n) : c_(static_cast<size_t>(n)) {}
  RatVec(std::initializer_list<Rational> xs) : c_(xs) {}
  explicit RatVec(std::vector<Rational> xs) : c_(std::move(xs)) {}

  static RatVec zero(int n) { return RatVec(n); }
  static RatVec ones(int n);
  static RatVec basis(int n, int i);

  int dim() const { return static_cast<int>(c_.size()); }
  Rational& operator[](int i) { return c_[static_cast<size_t>(i)]; }
  const Rational& operator[](int i) const { return c_[static_cast<size_t>(i)]; }

  const std::vector<Rational>& coords() const { return c_; }

  bool is_zero() const;
  bool is_integral() const;

  /// Componentwise fractional part; the representative in [0,1)^n.
  RatVec frac() const;
  std::vector<Int> floor() const;

  Rational linf_norm() const;
  Rational l1_norm() const;

  std::string str() const;

  friend RatVec operator+(const RatVec& a, const RatVec& b);
  friend RatVec operator-(const RatVec& a, const RatVec& b);
  friend RatVec operator*(const Rational& s, const RatVec& a);
  RatVec operator-() const;

  friend Rational dot(const RatVec& a, const RatVec& b);

  friend bool operator==(const RatVec& a, const RatVec& b) { return a.c_ == b.c_; }
  friend bool operator!=(const RatVec& a, const RatVec& b) { return !(a == b); }
  /// Lexicographic order, usable as an ordered-container key.
  friend bool operator<(const RatVec& a, const RatVec& b);

 private:
  std::vector<Rational> c_;
};

/// Throws ConstructionError unless a and b have equal dimension.
void require_same_dim(const RatVec& a, const RatVec& b, const char* what);

/// lcm of the (lowest-terms) denominators of the components.
Int lcm_of_denominators(const RatVec& v);

}  // namespace gjext
