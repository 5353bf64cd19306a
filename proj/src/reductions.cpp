#include "exactfit/reductions.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace exactfit::reduce {

void PoitsFormula::validate() const {
  if (num_vars < 1) throw std::invalid_argument("formula needs at least one variable");
  if (clauses.empty()) throw std::invalid_argument("formula needs at least one clause");
  for (const auto& clause : clauses)
    for (int v : clause)
      if (v < 1 || v > num_vars)
        throw std::invalid_argument("literal index out of range: " + std::to_string(v));
}

bool poits_verify(const PoitsFormula& formula, const TruthAssignment& assignment) {
  formula.validate();
  for (const auto& clause : formula.clauses) {
    int true_count = 0;
    for (int v : clause)
      if (assignment.is_true(v)) ++true_count;
    if (true_count != 1) return false;
  }
  return true;
}

void SelectionGadgetSpec::validate() const {
  if (slopes.size() < 2) throw std::invalid_argument("gadget needs at least two slopes");
  for (std::size_t i = 1; i < slopes.size(); ++i)
    if (!(slopes[i - 1] < slopes[i]))
      throw std::invalid_argument("gadget slopes must be strictly increasing");
  if (epsilon <= 0) throw std::invalid_argument("gadget epsilon must be positive");
  for (const Rat& s : {slopes.front(), slopes.back()}) {
    if (s == 0) continue;  // a zero end slope imposes no bound
    if (epsilon * 3 * abs(s) > 1)
      throw std::invalid_argument("gadget epsilon exceeds 1/(3|s|) for an end slope");
  }
}

namespace {

// Center-column profile: (x2 offset, label). The full version samples the
// ramps at +-5/3 and +-4/3; the threshold variant drops those four rows.
std::vector<std::pair<Rat, Rat>> center_profile(bool with_ramp_samples) {
  const Rat third = Rat(1) / Rat(3);
  std::vector<std::pair<Rat, Rat>> rows;
  rows.push_back({Rat(-4), Rat(0)});
  rows.push_back({Rat(-3), Rat(0)});
  rows.push_back({Rat(-2), Rat(0)});
  if (with_ramp_samples) {
    rows.push_back({Rat(-5) * third, third});
    rows.push_back({Rat(-4) * third, 2 * third});
  }
  rows.push_back({Rat(-1), Rat(1)});
  rows.push_back({Rat(0), Rat(1)});
  rows.push_back({Rat(1), Rat(1)});
  if (with_ramp_samples) {
    rows.push_back({Rat(4) * third, 2 * third});
    rows.push_back({Rat(5) * third, third});
  }
  rows.push_back({Rat(2), Rat(0)});
  rows.push_back({Rat(3), Rat(0)});
  rows.push_back({Rat(4), Rat(0)});
  return rows;
}

std::vector<nets::LabeledPoint> gadget_points(const SelectionGadgetSpec& spec,
                                              bool with_ramp_samples) {
  spec.validate();
  const Rat& z = spec.offset;
  const Rat& eps = spec.epsilon;
  const Rat s_lo = spec.slopes.front();
  const Rat s_hi = spec.slopes.back();

  std::vector<nets::LabeledPoint> pts;
  for (const auto& [dx2, label] : center_profile(with_ramp_samples))
    pts.push_back({{Rat(0), z + dx2}, label});

  // Left flank at x1 = -eps: ramp ends shifted so every listed slope keeps
  // its levee profile over the column.
  const std::array<std::pair<Rat, Rat>, 9> left = {{
      {Rat(-4) - eps * s_hi, Rat(0)},
      {Rat(-3) - eps * s_hi, Rat(0)},
      {Rat(-2) - eps * s_hi, Rat(0)},
      {Rat(-1) - eps * s_lo, Rat(1)},
      {Rat(0), Rat(1)},
      {Rat(1) - eps * s_hi, Rat(1)},
      {Rat(2) - eps * s_lo, Rat(0)},
      {Rat(3) - eps * s_lo, Rat(0)},
      {Rat(4) - eps * s_lo, Rat(0)},
  }};
  for (const auto& [dx2, label] : left) pts.push_back({{-eps, z + dx2}, label});

  // Right flank at x1 = +eps, mirrored shifts.
  const std::array<std::pair<Rat, Rat>, 9> right = {{
      {Rat(-4) + eps * s_lo, Rat(0)},
      {Rat(-3) + eps * s_lo, Rat(0)},
      {Rat(-2) + eps * s_lo, Rat(0)},
      {Rat(-1) + eps * s_hi, Rat(1)},
      {Rat(0), Rat(1)},
      {Rat(1) + eps * s_lo, Rat(1)},
      {Rat(2) + eps * s_hi, Rat(0)},
      {Rat(3) + eps * s_hi, Rat(0)},
      {Rat(4) + eps * s_hi, Rat(0)},
  }};
  for (const auto& [dx2, label] : right) pts.push_back({{eps, z + dx2}, label});

  // Pinch points: on the levee boundary of both adjacent slopes, killing any
  // fit with a slope strictly between two listed ones.
  for (std::size_t i = 0; i + 1 < spec.slopes.size(); ++i) {
    const Rat gap = spec.slopes[i + 1] - spec.slopes[i];
    const Rat x1 = Rat(4) / gap;
    const Rat x2 = 2 * (spec.slopes[i] + spec.slopes[i + 1]) / gap;
    pts.push_back({{-x1, z - x2}, Rat(0)});
    pts.push_back({{x1, z + x2}, Rat(0)});
  }
  return pts;
}

}  // namespace

std::vector<nets::LabeledPoint> selection_gadget_points(const SelectionGadgetSpec& spec) {
  return gadget_points(spec, true);
}

std::vector<nets::LabeledPoint> selection_gadget_points_lt(const SelectionGadgetSpec& spec) {
  return gadget_points(spec, false);
}

GlobalConstruction build_global_construction(const PoitsFormula& formula) {
  formula.validate();
  const int m = static_cast<int>(formula.clauses.size());
  const int n = formula.num_vars;

  GlobalConstruction g;
  g.formula = formula;
  g.slope_gap = Rat(1) / Rat(2 * m);
  g.max_slope = Rat(1);
  g.spacing = Rat(8) * g.max_slope / g.slope_gap + 6;  // 16m + 6

  // Uniform flank distance: tightest 1/(3|s|) over the end slopes of every
  // gadget, zero slopes imposing no bound. All slopes here have |s| <= 1.
  Rat epsilon = Rat(1) / Rat(3);
  auto tighten = [&epsilon](const Rat& s) {
    if (s == 0) return;
    Rat bound = Rat(1) / (3 * abs(s));
    if (bound < epsilon) epsilon = bound;
  };

  std::vector<std::vector<Rat>> clause_slopes(m);
  for (int j = 1; j <= m; ++j) {
    for (int r = 1; r <= 3; ++r)
      clause_slopes[j - 1].push_back(Rat(2 * j - 2 + (r - 1)) * g.slope_gap - 1);
    tighten(clause_slopes[j - 1].front());
    tighten(clause_slopes[j - 1].back());
  }
  tighten(Rat(-1));
  tighten(Rat(1));
  g.epsilon = epsilon;

  for (int j = 1; j <= m; ++j) {
    SelectionGadgetSpec spec{clause_slopes[j - 1], Rat(j) * g.spacing, epsilon};
    spec.validate();
    for (int r = 1; r <= 3; ++r)
      g.levee_catalog.push_back(
          {{LeveeId::Kind::Clause, j, r}, clause_slopes[j - 1][r - 1], spec.offset});
    g.clause_gadgets.push_back(std::move(spec));
  }
  for (int i = 1; i <= n; ++i) {
    SelectionGadgetSpec spec{{Rat(-1), Rat(1)}, Rat(-i) * g.spacing, epsilon};
    spec.validate();
    g.levee_catalog.push_back({{LeveeId::Kind::Variable, i, -1}, Rat(-1), spec.offset});
    g.levee_catalog.push_back({{LeveeId::Kind::Variable, i, +1}, Rat(1), spec.offset});
    g.variable_gadgets.push_back(std::move(spec));
  }

  // Consistency point for slot r of clause j: the crossing of the clause
  // levee's center line with the +1-slope center line of its variable.
  for (int j = 1; j <= m; ++j) {
    for (int r = 1; r <= 3; ++r) {
      const int i = formula.clauses[j - 1][r - 1];
      const Rat& s = clause_slopes[j - 1][r - 1];
      const Rat x1 = g.spacing * Rat(i + j) / (Rat(1) - s);
      nets::LabeledPoint point{{x1, x1 - g.spacing * Rat(i)}, Rat(1)};
      g.consistency_points.push_back({j, r, i, std::move(point)});
    }
  }
  return g;
}

std::vector<LeveeId> nonzero_levees_at(const GlobalConstruction& construction, int clause,
                                       int slot) {
  const nets::LabeledPoint* found = nullptr;
  for (const auto& cp : construction.consistency_points)
    if (cp.clause == clause && cp.slot == slot) found = &cp.point;
  if (!found) throw std::invalid_argument("no such consistency point");
  std::vector<LeveeId> ids;
  for (const auto& entry : construction.levee_catalog)
    if (nets::levee_value(entry.slope, found->x[0], found->x[1] - entry.offset) != 0)
      ids.push_back(entry.id);
  return ids;
}

namespace {

// Merges exact coordinate duplicates; a conflicting label means the
// construction itself is broken and is reported as such.
std::vector<nets::LabeledPoint> dedup_points(std::vector<nets::LabeledPoint> raw) {
  std::vector<nets::LabeledPoint> out;
  std::map<std::vector<Rat>, Rat> seen;
  for (auto& p : raw) {
    auto [it, inserted] = seen.emplace(p.x, p.y);
    if (inserted) {
      out.push_back(std::move(p));
    } else if (it->second != p.y) {
      throw std::runtime_error("construction emitted one coordinate with two labels");
    }
  }
  return out;
}

nets::Instance assemble_poits_instance(const PoitsFormula& formula, bool threshold) {
  const GlobalConstruction g = build_global_construction(formula);
  std::vector<nets::LabeledPoint> raw;
  for (const auto& spec : g.clause_gadgets) {
    auto pts = threshold ? selection_gadget_points_lt(spec) : selection_gadget_points(spec);
    raw.insert(raw.end(), pts.begin(), pts.end());
  }
  for (const auto& spec : g.variable_gadgets) {
    auto pts = threshold ? selection_gadget_points_lt(spec) : selection_gadget_points(spec);
    raw.insert(raw.end(), pts.begin(), pts.end());
  }
  for (const auto& cp : g.consistency_points) raw.push_back(cp.point);

  const int m = static_cast<int>(formula.clauses.size());
  const int n = formula.num_vars;
  nets::Instance inst;
  inst.dim = 2;
  inst.k = (threshold ? 2 : 4) * (m + n);
  inst.gamma = Rat(0);
  inst.activation = threshold ? nets::Activation::LinearThreshold : nets::Activation::Relu;
  inst.points = dedup_points(std::move(raw));
  inst.validate();
  return inst;
}

// Slope selection induced by an assignment: the unique true literal per
// clause when the assignment is a witness, otherwise first-true-or-1.
std::vector<int> clause_slots(const PoitsFormula& formula, const TruthAssignment& assignment) {
  std::vector<int> slots;
  for (const auto& clause : formula.clauses) {
    int slot = 1;
    for (int r = 3; r >= 1; --r)
      if (assignment.is_true(clause[r - 1])) slot = r;
    slots.push_back(slot);
  }
  return slots;
}

}  // namespace

nets::Instance poits_reduction(const PoitsFormula& formula) {
  return assemble_poits_instance(formula, false);
}

nets::Instance poits_reduction_lt(const PoitsFormula& formula) {
  return assemble_poits_instance(formula, true);
}

nets::ReluNetwork poits_candidate_network(const PoitsFormula& formula,
                                          const TruthAssignment& assignment) {
  const GlobalConstruction g = build_global_construction(formula);
  const std::vector<int> slots = clause_slots(formula, assignment);
  nets::ReluNetwork net;
  net.dim = 2;
  for (int i = 1; i <= formula.num_vars; ++i) {
    const Rat slope = assignment.is_true(i) ? Rat(-1) : Rat(1);
    nets::ReluNetwork levee = nets::levee_network(slope, Rat(-i) * g.spacing);
    net.units.insert(net.units.end(), levee.units.begin(), levee.units.end());
  }
  for (std::size_t j = 0; j < formula.clauses.size(); ++j) {
    const Rat& slope = g.clause_gadgets[j].slopes[slots[j] - 1];
    nets::ReluNetwork levee = nets::levee_network(slope, g.clause_gadgets[j].offset);
    net.units.insert(net.units.end(), levee.units.begin(), levee.units.end());
  }
  return net;
}

nets::LTNetwork poits_candidate_lt(const PoitsFormula& formula,
                                   const TruthAssignment& assignment) {
  const GlobalConstruction g = build_global_construction(formula);
  const std::vector<int> slots = clause_slots(formula, assignment);
  nets::LTNetwork net;
  net.dim = 2;
  for (int i = 1; i <= formula.num_vars; ++i) {
    const Rat slope = assignment.is_true(i) ? Rat(-1) : Rat(1);
    nets::LTNetwork stripe = nets::stripe_network(slope, Rat(-i) * g.spacing);
    net.units.insert(net.units.end(), stripe.units.begin(), stripe.units.end());
  }
  for (std::size_t j = 0; j < formula.clauses.size(); ++j) {
    const Rat& slope = g.clause_gadgets[j].slopes[slots[j] - 1];
    nets::LTNetwork stripe = nets::stripe_network(slope, g.clause_gadgets[j].offset);
    net.units.insert(net.units.end(), stripe.units.begin(), stripe.units.end());
  }
  return net;
}

nets::ReluNetwork poits_solution_network(const PoitsFormula& formula,
                                         const TruthAssignment& assignment) {
  if (!poits_verify(formula, assignment))
    throw std::invalid_argument("assignment does not satisfy the formula one-in-three");
  return poits_candidate_network(formula, assignment);
}

nets::LTNetwork poits_solution_lt(const PoitsFormula& formula,
                                  const TruthAssignment& assignment) {
  if (!poits_verify(formula, assignment))
    throw std::invalid_argument("assignment does not satisfy the formula one-in-three");
  return poits_candidate_lt(formula, assignment);
}

void HsepInput::validate() const {
  if (q_points.empty() || p_points.empty())
    throw std::invalid_argument("both point sets must be nonempty");
  const std::size_t width = q_points.front().size();
  if (width == 0) throw std::invalid_argument("points must have at least one coordinate");
  for (const auto& pt : q_points)
    if (pt.size() != width) throw std::invalid_argument("point widths differ");
  for (const auto& pt : p_points)
    if (pt.size() != width) throw std::invalid_argument("point widths differ");
}

bool HsepInput::disjoint() const {
  for (const auto& q : q_points)
    for (const auto& p : p_points)
      if (q == p) return false;
  return true;
}

int HsepInput::dim() const { return static_cast<int>(q_points.front().size()); }

int HsepInput::total_points() const {
  std::set<std::vector<Rat>> distinct(q_points.begin(), q_points.end());
  distinct.insert(p_points.begin(), p_points.end());
  return static_cast<int>(distinct.size());
}

Rat HsepInput::epsilon() const {
  const Rat m(total_points());
  return Rat(1) / (m * m * m);
}

namespace {

Rat dot_offset(const std::vector<Rat>& h, const Rat& o, const std::vector<Rat>& x) {
  Rat acc = o;
  for (std::size_t i = 0; i < h.size(); ++i) acc += h[i] * x[i];
  return acc;
}

Rat squared_norm(const std::vector<Rat>& h) {
  Rat acc(0);
  for (const Rat& v : h) acc += v * v;
  return acc;
}

Rat l1_norm(const std::vector<Rat>& v) {
  Rat acc(0);
  for (const Rat& c : v) acc += abs(c);
  return acc;
}

int sign_of(const Rat& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace

bool hsep_check_separation(const HsepInput& input) {
  input.validate();
  if (!input.witness) throw std::invalid_argument("no witness hyperplanes attached");
  const HsepWitness& w = *input.witness;
  if (static_cast<int>(w.h1.size()) != input.dim() ||
      static_cast<int>(w.h2.size()) != input.dim())
    throw std::invalid_argument("witness width does not match points");

  for (const auto& q : input.q_points) {
    if (!(dot_offset(w.h1, w.o1, q) > 0)) return false;
    if (!(dot_offset(w.h2, w.o2, q) < 0)) return false;
  }
  for (const auto& p : input.p_points)
    if (sign_of(dot_offset(w.h1, w.o1, p)) != sign_of(dot_offset(w.h2, w.o2, p))) return false;

  // Margin in squared form: (h.x + o)^2 > eps^2 |h|^2 for every input point.
  const Rat eps = input.epsilon();
  const Rat eps_sq = eps * eps;
  const Rat n1 = squared_norm(w.h1);
  const Rat n2 = squared_norm(w.h2);
  auto margin_ok = [&](const std::vector<Rat>& x) {
    Rat v1 = dot_offset(w.h1, w.o1, x);
    Rat v2 = dot_offset(w.h2, w.o2, x);
    return v1 * v1 > eps_sq * n1 && v2 * v2 > eps_sq * n2;
  };
  for (const auto& q : input.q_points)
    if (!margin_ok(q)) return false;
  for (const auto& p : input.p_points)
    if (!margin_ok(p)) return false;
  return true;
}

nets::Instance hsep_reduction(const HsepInput& input) {
  input.validate();
  if (!input.disjoint()) throw std::invalid_argument("point sets must be disjoint");
  const Rat eps = input.epsilon();

  std::vector<nets::LabeledPoint> raw;
  for (const auto& q : input.q_points) raw.push_back({q, Rat(1)});
  for (const auto& p : input.p_points) raw.push_back({p, Rat(0)});
  for (const auto& q : input.q_points) {
    for (const auto& p : input.p_points) {
      std::vector<Rat> diff(q.size());
      for (std::size_t t = 0; t < q.size(); ++t) diff[t] = q[t] - p[t];
      const Rat mix = eps / (2 * l1_norm(diff));  // nonzero by disjointness
      std::vector<Rat> near_q(q.size()), near_p(q.size());
      for (std::size_t t = 0; t < q.size(); ++t) {
        near_q[t] = q[t] - mix * diff[t];
        near_p[t] = p[t] + mix * diff[t];
      }
      raw.push_back({std::move(near_q), Rat(1)});
      raw.push_back({std::move(near_p), Rat(0)});
    }
  }

  nets::Instance inst;
  inst.dim = input.dim();
  inst.k = 4;
  inst.gamma = Rat(0);
  inst.activation = nets::Activation::Relu;
  inst.points = dedup_points(std::move(raw));
  inst.validate();
  return inst;
}

nets::ReluNetwork hsep_solution_network(const HsepInput& input) {
  if (!hsep_check_separation(input))
    throw std::invalid_argument("witness hyperplanes do not separate the sets");
  const HsepWitness& w = *input.witness;

  // Rescale each hyperplane so its largest coefficient has magnitude 1; the
  // Euclidean norm is then at least 1, which the step margins rely on.
  auto normalized = [](std::vector<Rat> h, Rat o) {
    Rat biggest(0);
    for (const Rat& v : h)
      if (abs(v) > biggest) biggest = abs(v);
    if (biggest == 0) throw std::invalid_argument("witness hyperplane has a zero normal");
    for (Rat& v : h) v /= biggest;
    return std::make_pair(std::move(h), Rat(o / biggest));
  };
  auto [h1, o1] = normalized(w.h1, w.o1);
  auto [h2, o2] = normalized(w.h2, w.o2);

  const Rat beta = Rat(4) / input.epsilon();
  auto scaled = [&beta](const std::vector<Rat>& h) {
    std::vector<Rat> out(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) out[i] = beta * h[i];
    return out;
  };

  nets::ReluNetwork net;
  net.dim = input.dim();
  const std::vector<Rat> w1 = scaled(h1);
  const std::vector<Rat> w2 = scaled(h2);
  net.units.push_back({w1, Rat(beta * o1), Rat(1)});
  net.units.push_back({w1, Rat(beta * o1 - 1), Rat(-1)});
  net.units.push_back({w2, Rat(beta * o2), Rat(-1)});
  net.units.push_back({w2, Rat(beta * o2 - 1), Rat(1)});
  return net;
}

}  // namespace exactfit::reduce
