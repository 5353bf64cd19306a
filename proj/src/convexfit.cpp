#include "exactfit/convexfit.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace exactfit::convex {

namespace {

constexpr int kMaxUnits = 20;  // 2^k buckets are materialized

void check_instance(const nets::Instance& inst) {
  inst.validate();
  if (inst.activation != nets::Activation::Relu)
    throw std::invalid_argument("convex exact fit requires rectifier activation");
  if (inst.gamma != 0)
    throw std::invalid_argument("convex exact fit requires gamma = 0");
  if (inst.k > kMaxUnits)
    throw std::invalid_argument("unit count too large for bucket enumeration (k <= 20)");
}

}  // namespace

PieceAssignment PieceAssignment::initial(const nets::Instance& inst) {
  if (inst.k > kMaxUnits)
    throw std::invalid_argument("unit count too large for bucket enumeration (k <= 20)");
  PieceAssignment a;
  a.k = inst.k;
  a.d = inst.dim;
  a.points = inst.points;
  a.unassigned.resize(inst.points.size());
  for (std::size_t i = 0; i < inst.points.size(); ++i) a.unassigned[i] = static_cast<int>(i);
  a.buckets.assign(std::size_t(1) << inst.k, {});
  return a;
}

void PieceAssignment::validate() const {
  if (static_cast<int>(buckets.size()) != bucket_count())
    throw std::logic_error("bucket count does not match 2^k");
  std::vector<int> seen(points.size(), 0);
  for (int i : unassigned) seen.at(i)++;
  for (const auto& bucket : buckets)
    for (int i : bucket) seen.at(i)++;
  for (int count : seen)
    if (count != 1) throw std::logic_error("assignment is not a partition of the points");
}

std::string ExtendedRational::to_string() const {
  switch (kind) {
    case Kind::NegInfinity: return "-inf";
    case Kind::PosInfinity: return "+inf";
    case Kind::Finite: return rat_to_string(value);
  }
  return {};
}

ConvexReluNetwork::ConvexReluNetwork(nets::ReluNetwork n) : net(std::move(n)) {
  nets::validate(net);
  for (const nets::Unit& u : net.units)
    if (u.a != 1) throw std::invalid_argument("convex network units must have a = +1");
}

lp::Polyhedron eq6_polyhedron(const PieceAssignment& assignment) {
  const int k = assignment.k;
  const int d = assignment.d;
  const int nv = k * (d + 1);
  lp::Polyhedron poly(nv);
  for (int i = 0; i < assignment.bucket_count(); ++i) {
    const ActivationIndexSet set = ActivationIndexSet::from_index(i);
    for (int idx : assignment.buckets[i]) {
      const nets::LabeledPoint& p = assignment.points[idx];
      for (int j = 0; j < k; ++j) {
        std::vector<Rat> row(nv, Rat(0));
        for (int t = 0; t < d; ++t) row[j * (d + 1) + t] = p.x[t];
        row[j * (d + 1) + d] = Rat(1);
        poly.add({std::move(row), set.contains(j) ? lp::Rel::Ge : lp::Rel::Le, Rat(0)});
      }
      // Piece value; the empty bucket's empty sum only yields a row when it
      // is falsifiable (label nonzero).
      if (!set.empty() || p.y != 0) {
        std::vector<Rat> row(nv, Rat(0));
        for (int j = 0; j < k; ++j) {
          if (!set.contains(j)) continue;
          for (int t = 0; t < d; ++t) row[j * (d + 1) + t] += p.x[t];
          row[j * (d + 1) + d] += 1;
        }
        poly.add({std::move(row), lp::Rel::Eq, p.y});
      }
    }
  }
  return poly;
}

namespace {

std::vector<Rat> piece_objective(const std::vector<Rat>& x, int bucket, int k, int d) {
  const ActivationIndexSet set = ActivationIndexSet::from_index(bucket);
  std::vector<Rat> c(k * (d + 1), Rat(0));
  for (int j = 0; j < k; ++j) {
    if (!set.contains(j)) continue;
    for (int t = 0; t < d; ++t) c[j * (d + 1) + t] += x[t];
    c[j * (d + 1) + d] += 1;
  }
  return c;
}

ExtendedRational lower_bound_over(const lp::Polyhedron& poly, const std::vector<Rat>& x,
                                  int bucket, int k, int d) {
  lp::LpOutcome out = lp::solve_lp(poly, piece_objective(x, bucket, k, d), lp::Sense::Min);
  switch (out.verdict) {
    case lp::Verdict::Infeasible: return ExtendedRational::pos_infinity();
    case lp::Verdict::Unbounded: return ExtendedRational::neg_infinity();
    case lp::Verdict::Optimal: return ExtendedRational::finite(*out.value);
  }
  throw std::logic_error("unreachable");
}

nets::ReluNetwork network_from_witness(const std::vector<Rat>& witness, int k, int d) {
  nets::ReluNetwork net;
  net.dim = d;
  net.units.reserve(k);
  for (int j = 0; j < k; ++j) {
    nets::Unit u;
    u.w.assign(witness.begin() + j * (d + 1), witness.begin() + j * (d + 1) + d);
    u.b = witness[j * (d + 1) + d];
    u.a = Rat(1);
    net.units.push_back(std::move(u));
  }
  return net;
}

void move_point(PieceAssignment& a, int point, int bucket) {
  auto it = std::find(a.unassigned.begin(), a.unassigned.end(), point);
  if (it == a.unassigned.end()) throw std::logic_error("point is not unassigned");
  a.unassigned.erase(it);
  a.buckets[bucket].push_back(point);
}

}  // namespace

std::optional<ConvexReluNetwork> check_feasibility(const PieceAssignment& assignment) {
  if (!assignment.unassigned.empty())
    throw std::invalid_argument("feasibility check requires a complete assignment");
  auto witness = lp::feasible(eq6_polyhedron(assignment));
  if (!witness) return std::nullopt;
  return ConvexReluNetwork(network_from_witness(*witness, assignment.k, assignment.d));
}

ExtendedRational lower_bound(const std::vector<Rat>& x, int bucket,
                             const PieceAssignment& assignment) {
  if (bucket < 0 || bucket >= assignment.bucket_count())
    throw std::invalid_argument("bucket index out of range");
  return lower_bound_over(eq6_polyhedron(assignment), x, bucket, assignment.k, assignment.d);
}

std::optional<PieceAssignment> check_forced_points(PieceAssignment assignment,
                                                   SearchStats* stats, SearchLog* log) {
  for (;;) {
    const lp::Polyhedron poly = eq6_polyhedron(assignment);
    bool moved = false;
    for (std::size_t pi = 0; pi < assignment.unassigned.size() && !moved; ++pi) {
      const int idx = assignment.unassigned[pi];
      const nets::LabeledPoint& p = assignment.points[idx];
      for (int i = 0; i < assignment.bucket_count(); ++i) {
        ExtendedRational mu = lower_bound_over(poly, p.x, i, assignment.k, assignment.d);
        if (mu.equals(p.y)) {
          if (stats) stats->forced_moves++;
          if (log) log->events.push_back({SearchEvent::Kind::Forced, idx, i, mu.to_string(), false});
          move_point(assignment, idx, i);
          moved = true;  // restart the double loop from the first point
          break;
        }
        if (mu.greater_than(p.y)) {
          if (stats) stats->rejections++;
          if (log) log->events.push_back({SearchEvent::Kind::Reject, idx, i, mu.to_string(), false});
          return std::nullopt;
        }
      }
    }
    if (!moved) return assignment;
  }
}

namespace {

std::optional<ConvexReluNetwork> search(const PieceAssignment& state, int depth,
                                        SearchStats& stats, SearchLog* log) {
  stats.nodes++;
  stats.max_depth = std::max(stats.max_depth, depth);
  if (state.unassigned.empty()) {
    auto result = check_feasibility(state);
    if (log)
      log->events.push_back({SearchEvent::Kind::Leaf, -1, -1, {}, result.has_value()});
    return result;
  }
  const int point = state.unassigned.front();
  for (int i = 0; i < state.bucket_count(); ++i) {
    PieceAssignment child = state;
    move_point(child, point, i);
    if (log) log->events.push_back({SearchEvent::Kind::Place, point, i, {}, false});
    auto propagated = check_forced_points(std::move(child), &stats, log);
    if (propagated) {
      auto result = search(*propagated, depth + 1, stats, log);
      if (result) return result;
    }
    if (log) log->events.push_back({SearchEvent::Kind::Pop, -1, -1, {}, false});
  }
  return std::nullopt;
}

}  // namespace

std::optional<ConvexReluNetwork> exact_fit_convex(const nets::Instance& inst,
                                                  SearchStats* stats, SearchLog* log) {
  check_instance(inst);
  SearchStats local;
  SearchStats& s = stats ? *stats : local;
  s = SearchStats{};
  if (log) *log = SearchLog{inst.k, inst.dim, static_cast<int>(inst.points.size()), {}};
  return search(PieceAssignment::initial(inst), 0, s, log);
}

std::optional<nets::ReluNetwork> exact_fit_concave(const nets::Instance& inst,
                                                   SearchStats* stats) {
  nets::Instance negated = inst;
  for (nets::LabeledPoint& p : negated.points) p.y = -p.y;
  auto convex = exact_fit_convex(negated, stats);
  if (!convex) return std::nullopt;
  nets::ReluNetwork net = std::move(convex->net);
  for (nets::Unit& u : net.units) u.a = Rat(-1);
  return net;
}

bool verify_search_log(const nets::Instance& inst, const SearchLog& log) {
  if (log.k != inst.k || log.d != inst.dim ||
      log.n != static_cast<int>(inst.points.size()))
    return false;
  PieceAssignment state = PieceAssignment::initial(inst);

  struct Frame {
    int point;
    int bucket;
    std::vector<std::pair<int, int>> forced;  // (point, bucket) in move order
  };
  std::vector<Frame> stack;

  auto remove_from_bucket = [&](int point, int bucket) {
    auto& b = state.buckets[bucket];
    auto it = std::find(b.begin(), b.end(), point);
    if (it == b.end()) return false;
    b.erase(it);
    state.unassigned.insert(
        std::lower_bound(state.unassigned.begin(), state.unassigned.end(), point), point);
    return true;
  };

  for (const SearchEvent& e : log.events) {
    switch (e.kind) {
      case SearchEvent::Kind::Place: {
        if (e.bucket < 0 || e.bucket >= state.bucket_count()) return false;
        auto it = std::find(state.unassigned.begin(), state.unassigned.end(), e.point);
        if (it == state.unassigned.end()) return false;
        state.unassigned.erase(it);
        state.buckets[e.bucket].push_back(e.point);
        stack.push_back({e.point, e.bucket, {}});
        break;
      }
      case SearchEvent::Kind::Forced: {
        if (stack.empty()) return false;
        ExtendedRational mu = lower_bound(state.points[e.point].x, e.bucket, state);
        if (mu.to_string() != e.mu) return false;
        if (!mu.equals(state.points[e.point].y)) return false;
        auto it = std::find(state.unassigned.begin(), state.unassigned.end(), e.point);
        if (it == state.unassigned.end()) return false;
        state.unassigned.erase(it);
        state.buckets[e.bucket].push_back(e.point);
        stack.back().forced.emplace_back(e.point, e.bucket);
        break;
      }
      case SearchEvent::Kind::Reject: {
        ExtendedRational mu = lower_bound(state.points[e.point].x, e.bucket, state);
        if (mu.to_string() != e.mu) return false;
        if (!mu.greater_than(state.points[e.point].y)) return false;
        break;
      }
      case SearchEvent::Kind::Leaf: {
        if (!state.unassigned.empty()) return false;
        if (check_feasibility(state).has_value() != e.feasible) return false;
        break;
      }
      case SearchEvent::Kind::Pop: {
        if (stack.empty()) return false;
        const Frame& frame = stack.back();
        for (auto it = frame.forced.rbegin(); it != frame.forced.rend(); ++it)
          if (!remove_from_bucket(it->first, it->second)) return false;
        if (!remove_from_bucket(frame.point, frame.bucket)) return false;
        stack.pop_back();
        break;
      }
    }
  }
  return true;
}

}  // namespace exactfit::convex
