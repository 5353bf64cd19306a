#include "exactfit/oracle.hpp"

#include "exactfit/linalg.hpp"
#include "exactfit/linprog.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace exactfit::oracle {

namespace {

void check_guard(const nets::Instance& inst, nets::Activation expected) {
  inst.validate();
  if (inst.activation != expected)
    throw std::invalid_argument("instance activation does not match oracle");
  if (inst.gamma != 0) throw std::invalid_argument("oracle requires gamma = 0");
  const long long bits = static_cast<long long>(inst.points.size()) * inst.k;
  if (bits > kMaxPatternBits)
    throw std::invalid_argument("instance too large for enumeration: n*k = " +
                                std::to_string(bits) + " exceeds " +
                                std::to_string(kMaxPatternBits) + " (n = " +
                                std::to_string(inst.points.size()) + ", k = " +
                                std::to_string(inst.k) + ")");
}

SignPattern pattern_from_mask(int n, int k, std::uint64_t mask) {
  SignPattern p;
  p.n = n;
  p.k = k;
  p.active.resize(static_cast<std::size_t>(n) * k);
  for (std::size_t bit = 0; bit < p.active.size(); ++bit)
    p.active[bit] = (mask >> bit) & 1u;
  return p;
}

}  // namespace

std::optional<nets::ReluNetwork> relu_network_for_pattern(const nets::Instance& inst,
                                                          const SignPattern& pattern) {
  const int n = static_cast<int>(inst.points.size());
  const int k = inst.k;
  const int d = inst.dim;
  if (pattern.n != n || pattern.k != k || static_cast<int>(pattern.a.size()) != k)
    throw std::invalid_argument("pattern shape does not match instance");
  const int nv = k * (d + 1);
  lp::Polyhedron poly(nv);
  for (int i = 0; i < n; ++i) {
    const nets::LabeledPoint& p = inst.points[i];
    std::vector<Rat> value_row(nv, Rat(0));
    for (int j = 0; j < k; ++j) {
      std::vector<Rat> side(nv, Rat(0));
      for (int t = 0; t < d; ++t) side[j * (d + 1) + t] = p.x[t];
      side[j * (d + 1) + d] = Rat(1);
      if (pattern.at(i, j)) {
        for (int t = 0; t < d; ++t) value_row[j * (d + 1) + t] += pattern.a[j] * p.x[t];
        value_row[j * (d + 1) + d] += pattern.a[j];
      }
      poly.add({std::move(side), pattern.at(i, j) ? lp::Rel::Ge : lp::Rel::Le, Rat(0)});
    }
    poly.add({std::move(value_row), lp::Rel::Eq, p.y});
  }
  auto witness = lp::feasible(poly);
  if (!witness) return std::nullopt;
  nets::ReluNetwork net;
  net.dim = d;
  for (int j = 0; j < k; ++j) {
    nets::Unit u;
    u.w.assign(witness->begin() + j * (d + 1), witness->begin() + j * (d + 1) + d);
    u.b = (*witness)[j * (d + 1) + d];
    u.a = pattern.a[j];
    net.units.push_back(std::move(u));
  }
  return net;
}

std::optional<nets::ReluNetwork> brute_force_fit_relu(const nets::Instance& inst,
                                                      bool convex_only) {
  check_guard(inst, nets::Activation::Relu);
  const int n = static_cast<int>(inst.points.size());
  const int k = inst.k;
  const std::uint64_t pattern_count = std::uint64_t(1) << (static_cast<std::uint64_t>(n) * k);
  const std::uint64_t sign_count = convex_only ? 1 : (std::uint64_t(1) << k);

  for (std::uint64_t sign_mask = 0; sign_mask < sign_count; ++sign_mask) {
    std::vector<Rat> a(k, Rat(1));
    for (int j = 0; j < k; ++j)
      if ((sign_mask >> j) & 1u) a[j] = Rat(-1);

    for (std::uint64_t mask = 0; mask < pattern_count; ++mask) {
      SignPattern pattern = pattern_from_mask(n, k, mask);
      pattern.a = a;
      // A point with no active unit can only carry label zero.
      bool plausible = true;
      for (int i = 0; i < n && plausible; ++i) {
        bool any = false;
        for (int j = 0; j < k; ++j) any = any || pattern.at(i, j);
        if (!any && inst.points[i].y != 0) plausible = false;
      }
      if (!plausible) continue;
      auto net = relu_network_for_pattern(inst, pattern);
      if (net) return net;
    }
  }
  return std::nullopt;
}

std::optional<nets::LTNetwork> lt_network_for_pattern(const nets::Instance& inst,
                                                      const SignPattern& pattern) {
  const int n = static_cast<int>(inst.points.size());
  const int k = inst.k;
  const int d = inst.dim;

  // Output weights: sum of a_j over the units on at each point equals the label.
  linalg::Matrix indicator(n, std::vector<Rat>(k, Rat(0)));
  std::vector<Rat> labels(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j)
      if (pattern.at(i, j)) indicator[i][j] = Rat(1);
    labels[i] = inst.points[i].y;
  }
  auto a = linalg::solve(indicator, labels);
  if (!a) return std::nullopt;

  // Each unit independently needs a strictly separating hyperplane.
  nets::LTNetwork net;
  net.dim = d;
  for (int j = 0; j < k; ++j) {
    std::vector<lp::LinearConstraint> rows;
    for (int i = 0; i < n; ++i) {
      std::vector<Rat> coeffs(inst.points[i].x);
      coeffs.push_back(Rat(1));  // bias
      rows.push_back({std::move(coeffs), pattern.at(i, j) ? lp::Rel::Gt : lp::Rel::Le, Rat(0)});
    }
    auto witness = lp::strictly_feasible(rows, d + 1);
    if (!witness) return std::nullopt;
    nets::Unit u;
    u.w.assign(witness->begin(), witness->begin() + d);
    u.b = (*witness)[d];
    u.a = (*a)[j];
    net.units.push_back(std::move(u));
  }
  return net;
}

std::optional<nets::LTNetwork> brute_force_fit_lt(const nets::Instance& inst) {
  check_guard(inst, nets::Activation::LinearThreshold);
  const int n = static_cast<int>(inst.points.size());
  const int k = inst.k;
  const std::uint64_t pattern_count = std::uint64_t(1) << (static_cast<std::uint64_t>(n) * k);
  for (std::uint64_t mask = 0; mask < pattern_count; ++mask) {
    auto net = lt_network_for_pattern(inst, pattern_from_mask(n, k, mask));
    if (net) return net;
  }
  return std::nullopt;
}

}  // namespace exactfit::oracle
