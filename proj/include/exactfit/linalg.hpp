#pragma once

#include "exactfit/rational.hpp"

#include <optional>
#include <vector>

namespace exactfit::linalg {

using Matrix = std::vector<std::vector<Rat>>;

/// Rank over the rationals (exact Gaussian elimination).
int rank(Matrix a);

/// Particular solution of A x = y with free variables set to 0,
/// or nullopt when the system is inconsistent.
std::optional<std::vector<Rat>> solve(Matrix a, std::vector<Rat> y);

}  // namespace exactfit::linalg
