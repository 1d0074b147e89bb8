#include "gjext/freudenthal.hpp"

#include <algorithm>
#include <numeric>

#include "gjext/errors.hpp"

namespace gjext {

RatVec reduce_mod_lattice(const RatVec& x) { return x.frac(); }

RatVec SimplexId::vertex(int k, const Rational& delta) const {
  RatVec v = base;
  for (int j = 0; j < k; ++j) v[perm[static_cast<size_t>(j)]] += delta;
  return v;
}

LocatedCell locate_simplex(const RatVec& x, const Rational& delta) {
  unit_fraction_den(delta);
  const int n = x.dim();
  if (n < 1) throw ConstructionError("locate_simplex needs dimension >= 1");

  // Scaled coordinates x/delta; base = delta*floor(x/delta).
  std::vector<Rational> offsets(static_cast<size_t>(n));
  RatVec base(n);
  for (int i = 0; i < n; ++i) {
    Rational scaled = x[i] / delta;
    Int fl = scaled.floor();
    base[i] = Rational(fl) * delta;
    offsets[static_cast<size_t>(i)] = scaled - Rational(fl);  // in [0,1)
  }

  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Rational& fa = offsets[static_cast<size_t>(a)];
    const Rational& fb = offsets[static_cast<size_t>(b)];
    if (fa != fb) return fb < fa;  // non-increasing offsets
    return a < b;                  // ties: ascending coordinate index
  });

  std::vector<Rational> weights(static_cast<size_t>(n) + 1);
  weights[0] = Rational(1) - offsets[static_cast<size_t>(order[0])];
  for (int k = 1; k < n; ++k)
    weights[static_cast<size_t>(k)] =
        offsets[static_cast<size_t>(order[static_cast<size_t>(k - 1)])] - offsets[static_cast<size_t>(order[static_cast<size_t>(k)])];
  weights[static_cast<size_t>(n)] = offsets[static_cast<size_t>(order[static_cast<size_t>(n - 1)])];

  return LocatedCell{SimplexId{std::move(base), std::move(order)}, std::move(weights)};
}

uint64_t grid_point_count(int n, const Rational& delta, uint64_t budget) {
  Int p = unit_fraction_den(delta);
  Int total(1);
  for (int i = 0; i < n; ++i) {
    total *= p;
    if (cmp(total, budget) > 0)
      throw BudgetError("grid enumeration of " + total.get_str() + "+ points exceeds budget " + std::to_string(budget));
  }
  return total.get_ui();
}

GridPoints::GridPoints(int n, const Rational& delta, uint64_t budget) : n_(n), delta_(delta) {
  count_ = grid_point_count(n, delta, budget);
  p_ = static_cast<long>(unit_fraction_den(delta).get_ui());
}

GridPoints::iterator::iterator(const GridPoints* owner, bool at_end) : owner_(owner), done_(at_end) {
  if (!done_) idx_.assign(static_cast<size_t>(owner->n_), 0);
}

RatVec GridPoints::iterator::operator*() const {
  RatVec v(owner_->n_);
  for (int i = 0; i < owner_->n_; ++i) v[i] = Rational(idx_[static_cast<size_t>(i)], owner_->p_);
  return v;
}

GridPoints::iterator& GridPoints::iterator::operator++() {
  for (int i = owner_->n_ - 1; i >= 0; --i) {
    if (++idx_[static_cast<size_t>(i)] < owner_->p_) return *this;
    idx_[static_cast<size_t>(i)] = 0;
  }
  done_ = true;
  idx_.clear();
  return *this;
}

}  // namespace gjext
