#pragma once

#include "exactfit/nets.hpp"
#include "exactfit/rational.hpp"

#include <optional>
#include <vector>

namespace exactfit::oracle {

/// Hard cap on n*k for full pattern enumeration.
inline constexpr int kMaxPatternBits = 24;

/// One candidate certificate: which units are active (rectifiers) or
/// strictly positive (thresholds) at each point, row-major n x k, plus the
/// output sign vector for the rectifier case.
struct SignPattern {
  int n = 0;
  int k = 0;
  std::vector<bool> active;  // active[i*k + j]
  std::vector<Rat> a;        // rectifier signs (+1/-1); ignored for thresholds

  bool at(int i, int j) const { return active[static_cast<std::size_t>(i) * k + j]; }
};

/// Feasibility of one rectifier pattern: both halfspace sides are closed, and
/// the active units must sum (with signs) to the label at every point.
std::optional<nets::ReluNetwork> relu_network_for_pattern(const nets::Instance& inst,
                                                          const SignPattern& pattern);

/// Feasibility of one threshold pattern: output weights solve the exact
/// linear system over the indicator matrix, and each unit admits a strictly
/// separating hyperplane for its on/off split.
std::optional<nets::LTNetwork> lt_network_for_pattern(const nets::Instance& inst,
                                                      const SignPattern& pattern);

/// Exhaustive search over sign vectors (all +1 when convex_only) and all
/// 2^(nk) activation patterns in row-major binary order; first feasible
/// pattern wins. Requires gamma = 0 and n*k <= 24.
std::optional<nets::ReluNetwork> brute_force_fit_relu(const nets::Instance& inst,
                                                      bool convex_only);

/// Exhaustive search over indicator patterns, same order and guard.
std::optional<nets::LTNetwork> brute_force_fit_lt(const nets::Instance& inst);

}  // namespace exactfit::oracle
