#pragma once

#include <cstdint>
#include <iterator>
#include <vector>

#include "gjext/vec.hpp"

namespace gjext {

/// Default cap on grid enumerations (points per sweep). Guards against
/// strict-mode deltas wandering into grid sweeps for n >= 2.
constexpr uint64_t kDefaultEnumBudget = 100'000'000;

/// The representative of x in [0,1)^n with x - result in Z^n.
RatVec reduce_mod_lattice(const RatVec& x);

/// A maximal cell of the Coxeter-Freudenthal-Kuhn triangulation T_delta:
///   conv({u, u + delta e^(i1), ..., u + delta(e^(i1) + ... + e^(in))})
/// identified by its base lattice point u in U_delta and the permutation
/// (i1,...,in). Permutations are 0-based in code.
struct SimplexId {
  RatVec base;
  std::vector<int> perm;

  int dim() const { return base.dim(); }
  /// Vertex k (0..n) of the cell.
  RatVec vertex(int k, const Rational& delta) const;
};

struct LocatedCell {
  SimplexId cell;
  std::vector<Rational> weights;  // nonnegative, sums to 1, length n+1
};

/// Locates a maximal cell of T_delta containing x, together with the exact
/// barycentric weights of x in that cell. delta must be 1/p for p in N.
/// The permutation sorts the scaled fractional offsets (x-u)/delta in
/// non-increasing order; equal offsets are ordered by ascending coordinate
/// index, which makes the choice on shared faces deterministic.
LocatedCell locate_simplex(const RatVec& x, const Rational& delta);

/// |U_delta ∩ [0,1)^n| = p^n; throws BudgetError beyond the budget.
uint64_t grid_point_count(int n, const Rational& delta, uint64_t budget = kDefaultEnumBudget);

/// Deterministic row-major enumeration of U_delta ∩ [0,1)^n (axis 0 slowest).
class GridPoints {
 public:
  GridPoints(int n, const Rational& delta, uint64_t budget = kDefaultEnumBudget);

  uint64_t size() const { return count_; }
  int n() const { return n_; }
  const Rational& delta() const { return delta_; }
  long p() const { return p_; }

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = RatVec;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = RatVec;

    iterator() = default;
    iterator(const GridPoints* owner, bool at_end);
    RatVec operator*() const;
    const std::vector<long>& index() const { return idx_; }
    iterator& operator++();
    friend bool operator==(const iterator& a, const iterator& b) { return a.done_ == b.done_ && a.idx_ == b.idx_; }
    friend bool operator!=(const iterator& a, const iterator& b) { return !(a == b); }

   private:
    const GridPoints* owner_ = nullptr;
    std::vector<long> idx_;
    bool done_ = true;
  };

  iterator begin() const { return iterator(this, false); }
  iterator end() const { return iterator(this, true); }

 private:
  int n_;
  Rational delta_;
  long p_;
  uint64_t count_;
};

}  // namespace gjext
