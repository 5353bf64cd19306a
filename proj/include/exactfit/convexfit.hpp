#pragma once

#include "exactfit/linprog.hpp"
#include "exactfit/nets.hpp"
#include "exactfit/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace exactfit::convex {

/// Bucket index <-> subset of active units, identified by binary encoding:
/// bit j of the index says whether unit j is active on the piece.
struct ActivationIndexSet {
  unsigned bits = 0;

  static ActivationIndexSet from_index(int index) { return {static_cast<unsigned>(index)}; }
  int index() const { return static_cast<int>(bits); }
  bool contains(int j) const { return (bits >> j) & 1u; }
  bool empty() const { return bits == 0; }
};

/// Search state: unassigned points and one bucket per activation subset.
/// The constraint system built from the buckets is the single source of
/// truth for feasibility; points are tracked by original index.
struct PieceAssignment {
  int k = 0;
  int d = 0;
  std::vector<nets::LabeledPoint> points;
  std::vector<int> unassigned;             // ascending original indices
  std::vector<std::vector<int>> buckets;   // 2^k buckets of original indices

  static PieceAssignment initial(const nets::Instance& inst);
  int bucket_count() const { return 1 << k; }
  /// Throws std::logic_error if the index sets are not a partition.
  void validate() const;
};

/// Value of a lower-bound program: -inf when unbounded, +inf when infeasible.
struct ExtendedRational {
  enum class Kind { NegInfinity, Finite, PosInfinity };
  Kind kind = Kind::Finite;
  Rat value;

  static ExtendedRational neg_infinity() { return {Kind::NegInfinity, Rat(0)}; }
  static ExtendedRational pos_infinity() { return {Kind::PosInfinity, Rat(0)}; }
  static ExtendedRational finite(Rat v) { return {Kind::Finite, std::move(v)}; }

  bool equals(const Rat& y) const { return kind == Kind::Finite && value == y; }
  bool greater_than(const Rat& y) const {
    return kind == Kind::PosInfinity || (kind == Kind::Finite && value > y);
  }
  std::string to_string() const;
};

/// Rectifier network with every output coefficient fixed to +1; such a
/// network computes a convex piecewise-linear map.
struct ConvexReluNetwork {
  nets::ReluNetwork net;

  explicit ConvexReluNetwork(nets::ReluNetwork n);
};

/// Constraint system over the k(d+1) variables (w_j, b_j): every bucketed
/// point pins its side of all k unit hyperplanes and the value of its piece.
lp::Polyhedron eq6_polyhedron(const PieceAssignment& assignment);

/// Witness network for a complete assignment, if the system is feasible.
/// Requires assignment.unassigned to be empty.
std::optional<ConvexReluNetwork> check_feasibility(const PieceAssignment& assignment);

/// Exact minimum of the piece value sum_{j in bucket}(w_j.x + b_j) over the
/// assignment's constraint system.
ExtendedRational lower_bound(const std::vector<Rat>& x, int bucket,
                             const PieceAssignment& assignment);

struct SearchEvent {
  enum class Kind { Place, Forced, Reject, Leaf, Pop };
  Kind kind = Kind::Place;
  int point = -1;             // original index (Place/Forced/Reject)
  int bucket = -1;            // (Place/Forced/Reject)
  std::string mu;             // exact bound for Forced/Reject ("p/q", "-inf", "+inf")
  bool feasible = false;      // Leaf
};

/// Machine-readable trace of placements, forced moves, rejections and leaf
/// checks, replayable against the instance.
struct SearchLog {
  int k = 0, d = 0, n = 0;
  std::vector<SearchEvent> events;
};

struct SearchStats {
  long long nodes = 0;
  long long forced_moves = 0;
  long long rejections = 0;
  int max_depth = 0;  // placements on the deepest branch
};

/// Forced-point propagation: repeatedly scans unassigned points in index
/// order against buckets in index order; a point whose lower bound equals its
/// label is moved (and the scan restarts), a bound exceeding the label
/// rejects the branch (nullopt). Infeasibility counts as +inf and rejects.
std::optional<PieceAssignment> check_forced_points(PieceAssignment assignment,
                                                   SearchStats* stats = nullptr,
                                                   SearchLog* log = nullptr);

/// Decides exact fit by networks of k all-positive rectifier units, returning
/// a witness iff one exists. Branches the lowest-indexed unassigned point
/// over all buckets in index order, propagating forced points after every
/// placement. Requires gamma = 0 and rectifier activation.
std::optional<ConvexReluNetwork> exact_fit_convex(const nets::Instance& inst,
                                                  SearchStats* stats = nullptr,
                                                  SearchLog* log = nullptr);

/// Concave counterpart by label negation; the returned units carry a = -1.
std::optional<nets::ReluNetwork> exact_fit_concave(const nets::Instance& inst,
                                                   SearchStats* stats = nullptr);

/// Replays a search log against the instance, re-deriving every recorded
/// bound: forced moves must satisfy mu = y, rejections mu > y, leaf checks
/// must reproduce their feasibility verdicts. Returns false on any mismatch.
bool verify_search_log(const nets::Instance& inst, const SearchLog& log);

}  // namespace exactfit::convex
