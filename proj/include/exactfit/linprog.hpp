#pragma once

#include "exactfit/rational.hpp"

#include <optional>
#include <vector>

namespace exactfit::lp {

enum class Rel { Le, Ge, Eq, Lt, Gt };

/// One linear row a.x REL rhs over dense variable indices [0, num_vars).
struct LinearConstraint {
  std::vector<Rat> coeffs;
  Rel rel = Rel::Le;
  Rat rhs;
};

/// Finite system of non-strict constraints. Strict rows are only meaningful
/// to strictly_feasible() and are rejected here.
struct Polyhedron {
  int num_vars = 0;
  std::vector<LinearConstraint> constraints;

  Polyhedron() = default;
  explicit Polyhedron(int vars) : num_vars(vars) {}

  /// Throws std::invalid_argument on a width mismatch or a strict relation.
  void add(LinearConstraint c);
};

enum class Verdict { Optimal, Infeasible, Unbounded };
enum class Sense { Min, Max };

struct LpOutcome {
  Verdict verdict = Verdict::Infeasible;
  std::optional<Rat> value;                 // present iff Optimal
  std::optional<std::vector<Rat>> witness;  // present iff Optimal
};

/// Exact primal simplex with Bland's anti-cycling rule over free variables.
/// Equality rows are split into <= and >= at standard-form construction.
/// Deterministic: identical inputs yield identical verdicts and witnesses.
LpOutcome solve_lp(const Polyhedron& poly, const std::vector<Rat>& objective, Sense sense);

/// Exact point satisfying every constraint, or nullopt iff the system is empty.
std::optional<std::vector<Rat>> feasible(const Polyhedron& poly);

/// Decides systems that may contain strict rows. Each strict row a.x > b is
/// replaced by a.x >= b + t for a fresh slack t capped by t <= 1; the slack is
/// then maximized and a witness is returned iff the optimum is positive.
std::optional<std::vector<Rat>> strictly_feasible(const std::vector<LinearConstraint>& constraints,
                                                  int num_vars);

}  // namespace exactfit::lp
