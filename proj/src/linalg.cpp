#include "gjext/linalg.hpp"

namespace gjext {

int exact_rank(std::vector<RatVec> rows) {
  if (rows.empty()) return 0;
  int m = static_cast<int>(rows.size());
  int n = rows.front().dim();
  for (const auto& r : rows) require_same_dim(rows.front(), r, "rank");
  int rank = 0;
  for (int col = 0; col < n && rank < m; ++col) {
    int pivot = -1;
    for (int r = rank; r < m; ++r)
      if (!rows[static_cast<size_t>(r)][col].is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[static_cast<size_t>(rank)], rows[static_cast<size_t>(pivot)]);
    const Rational p = rows[static_cast<size_t>(rank)][col];
    for (int r = rank + 1; r < m; ++r) {
      Rational f = rows[static_cast<size_t>(r)][col] / p;
      if (f.is_zero()) continue;
      for (int c = col; c < n; ++c)
        rows[static_cast<size_t>(r)][c] -= f * rows[static_cast<size_t>(rank)][c];
    }
    ++rank;
  }
  return rank;
}

std::optional<RatVec> solve_linear(std::vector<RatVec> rows, RatVec rhs) {
  int n = static_cast<int>(rows.size());
  if (n == 0 || rows.front().dim() != n || rhs.dim() != n)
    throw ConstructionError("solve_linear expects a square system");
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (!rows[static_cast<size_t>(r)][col].is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) return std::nullopt;
    std::swap(rows[static_cast<size_t>(col)], rows[static_cast<size_t>(pivot)]);
    std::swap(rhs[col], rhs[pivot]);
    const Rational p = rows[static_cast<size_t>(col)][col];
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      Rational f = rows[static_cast<size_t>(r)][col] / p;
      if (f.is_zero()) continue;
      for (int c = col; c < n; ++c)
        rows[static_cast<size_t>(r)][c] -= f * rows[static_cast<size_t>(col)][c];
      rhs[r] -= f * rhs[col];
    }
  }
  RatVec x(n);
  for (int i = 0; i < n; ++i) x[i] = rhs[i] / rows[static_cast<size_t>(i)][i];
  return x;
}

}  // namespace gjext
