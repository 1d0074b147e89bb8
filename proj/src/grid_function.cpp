#include "gjext/grid_function.hpp"

#include <algorithm>
#include <numeric>

#include "gjext/errors.hpp"

namespace gjext {

namespace {

void require_on_grid(const RatVec& b, const Rational& delta) {
  for (int i = 0; i < b.dim(); ++i) {
    Rational scaled = b[i] / delta;
    if (!scaled.is_integer()) throw ConstructionError("b" + b.str() + " is not in U_" + delta.str());
    if (b[i].sign() < 0 || b[i] >= Rational(1)) throw ConstructionError("b" + b.str() + " not in [0,1)^n");
  }
}

}  // namespace

GridFunction::GridFunction(int n, const Rational& delta, const RatVec& b, std::vector<Rational> values)
    : n_(n), delta_(delta), b_(b), values_(std::move(values)) {
  uint64_t count = grid_point_count(n, delta);
  p_ = static_cast<long>(unit_fraction_den(delta).get_ui());
  if (b.dim() != n) throw ConstructionError("b dimension mismatch");
  require_on_grid(b, delta);
  if (values_.size() != count)
    throw ConstructionError("grid function needs " + std::to_string(count) + " values, got " +
                            std::to_string(values_.size()));
}

GridFunction GridFunction::interpolate_from_samples(const EvalFn& source, int n, const Rational& delta,
                                                    const RatVec& b, uint64_t budget) {
  GridPoints grid(n, delta, budget);
  std::vector<Rational> values;
  values.reserve(grid.size());
  for (const RatVec& u : grid) values.push_back(source(u));
  return GridFunction(n, delta, b, std::move(values));
}

uint64_t GridFunction::flat_index(const std::vector<long>& idx) const {
  uint64_t flat = 0;
  for (int i = 0; i < n_; ++i) {
    long k = idx[static_cast<size_t>(i)] % p_;
    if (k < 0) k += p_;
    flat = flat * static_cast<uint64_t>(p_) + static_cast<uint64_t>(k);
  }
  return flat;
}

Rational GridFunction::value_at_grid(const RatVec& u) const {
  std::vector<long> idx(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    Rational scaled = u[i] / delta_;
    if (!scaled.is_integer()) throw ConstructionError("point " + u.str() + " is not on the grid");
    Int k = scaled.num() % p_;
    if (sgn(k) < 0) k += p_;
    idx[static_cast<size_t>(i)] = static_cast<long>(k.get_si());
  }
  return values_[flat_index(idx)];
}

Rational GridFunction::eval(const RatVec& x) const {
  if (x.dim() != n_) throw ConstructionError("eval dimension mismatch");
  LocatedCell loc = locate_simplex(x, delta_);
  Rational out(0);
  for (int k = 0; k <= n_; ++k) {
    if (loc.weights[static_cast<size_t>(k)].is_zero()) continue;
    out += loc.weights[static_cast<size_t>(k)] * value_at_grid(loc.cell.vertex(k, delta_));
  }
  return out;
}

Rational GridFunction::lipschitz_constant(uint64_t budget) const {
  std::vector<int> perm(static_cast<size_t>(n_));
  std::iota(perm.begin(), perm.end(), 0);
  uint64_t cells = values_.size();
  uint64_t nfact = 1;
  for (int i = 2; i <= n_; ++i) nfact *= static_cast<uint64_t>(i);
  if (cells > budget / nfact) throw BudgetError("lipschitz sweep exceeds budget");

  Rational best(0);
  GridPoints grid(n_, delta_);
  do {
    for (auto it = grid.begin(); it != grid.end(); ++it) {
      std::vector<long> idx = it.index();
      Rational norm1(0);
      Rational prev = values_[flat_index(idx)];
      for (int k = 0; k < n_; ++k) {
        idx[static_cast<size_t>(perm[static_cast<size_t>(k)])] += 1;
        Rational cur = values_[flat_index(idx)];
        norm1 += (cur - prev).abs();
        prev = cur;
      }
      norm1 = norm1 * Rational(Int(p_));
      best = max(best, norm1);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace gjext
