#pragma once

#include <optional>
#include <vector>

#include "gjext/vec.hpp"

namespace gjext {

/// Rank of the spanned row space over the rationals (exact Gaussian
/// elimination). Rows must share a dimension.
int exact_rank(std::vector<RatVec> rows);

/// Solves the square system (rows as matrix rows) * x = rhs exactly.
/// Returns nullopt when the matrix is singular.
std::optional<RatVec> solve_linear(std::vector<RatVec> rows, RatVec rhs);

}  // namespace gjext
