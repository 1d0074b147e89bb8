#pragma once

#include <functional>
#include <vector>

#include "gjext/freudenthal.hpp"

namespace gjext {

/// Exact evaluation oracle on [0,1)^n.
using EvalFn = std::function<Rational(const RatVec&)>;

/// A periodic piecewise linear function on the triangulation T_delta,
/// determined by rational values on U_delta ∩ [0,1)^n and interpolated
/// barycentrically on each cell. Evaluation is exact and periodic.
class GridFunction {
 public:
  GridFunction(int n, const Rational& delta, const RatVec& b, std::vector<Rational> values);

  /// Samples `source` at every grid point (row-major). The result agrees
  /// with the source at every point of U_delta.
  static GridFunction interpolate_from_samples(const EvalFn& source, int n, const Rational& delta, const RatVec& b,
                                               uint64_t budget = kDefaultEnumBudget);

  int n() const { return n_; }
  const Rational& delta() const { return delta_; }
  long p() const { return p_; }
  const RatVec& b() const { return b_; }
  const std::vector<Rational>& values() const { return values_; }

  /// Exact barycentric interpolation; periodic in every coordinate.
  Rational eval(const RatVec& x) const;

  /// Value at a point of U_delta (any representative; reduced mod Z^n).
  Rational value_at_grid(const RatVec& u) const;
  Rational value_at_index(const std::vector<long>& idx) const { return values_[flat_index(idx)]; }

  /// max over the maximal cells of one period of ||a^P||_1, a valid
  /// Lipschitz constant with respect to the infinity norm.
  Rational lipschitz_constant(uint64_t budget = kDefaultEnumBudget) const;

  uint64_t flat_index(const std::vector<long>& idx) const;

  friend bool operator==(const GridFunction& a, const GridFunction& b) {
    return a.n_ == b.n_ && a.delta_ == b.delta_ && a.b_ == b.b_ && a.values_ == b.values_;
  }

 private:
  int n_;
  Rational delta_;
  long p_;
  RatVec b_;
  std::vector<Rational> values_;
};

}  // namespace gjext
