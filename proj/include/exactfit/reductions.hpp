#pragma once

#include "exactfit/nets.hpp"
#include "exactfit/rational.hpp"

#include <array>
#include <compare>
#include <optional>
#include <set>
#include <vector>

namespace exactfit::reduce {

/// Positive one-in-three SAT: clauses of exactly three positive literals,
/// satisfied when exactly one literal per clause is true.
struct PoitsFormula {
  int num_vars = 0;
  std::vector<std::array<int, 3>> clauses;  // 1-based variable indices

  /// Throws std::invalid_argument when empty or an index is out of range.
  void validate() const;
};

struct TruthAssignment {
  std::set<int> true_vars;  // 1-based

  bool is_true(int var) const { return true_vars.count(var) > 0; }
};

/// True iff every clause has exactly one true literal (slots counted with
/// multiplicity).
bool poits_verify(const PoitsFormula& formula, const TruthAssignment& assignment);

/// Point set forcing any tight piecewise-linear fit to pick one of the listed
/// slopes; centered on the vertical axis at height `offset`.
struct SelectionGadgetSpec {
  std::vector<Rat> slopes;  // strictly increasing, at least two
  Rat offset;
  Rat epsilon;              // > 0, and <= 1/(3|s|) for each nonzero end slope

  void validate() const;
};

/// The 31 + 2(l-1) gadget points: a 13-point center column with a full ramp
/// profile, two 9-point flanking columns, and one zero-labeled pinch point
/// per pair of consecutive slopes on either side.
std::vector<nets::LabeledPoint> selection_gadget_points(const SelectionGadgetSpec& spec);

/// Threshold-network variant: the center column drops the four fractional
/// ramp samples (stripes are 0/1-valued), keeping 27 + 2(l-1) points.
std::vector<nets::LabeledPoint> selection_gadget_points_lt(const SelectionGadgetSpec& spec);

struct LeveeId {
  enum class Kind { Clause, Variable };
  Kind kind = Kind::Clause;
  int major = 0;  // clause index j, or variable index i (1-based)
  int minor = 0;  // literal slot 1..3 for clauses; slope sign -1/+1 for variables

  friend auto operator<=>(const LeveeId&, const LeveeId&) = default;
};

/// Fully elaborated layout of the formula reduction: one three-slope gadget
/// per clause stacked above the axis origin, one two-slope gadget per
/// variable below it, and one label-1 consistency point per literal slot at
/// the crossing of the matching clause and variable center lines.
struct GlobalConstruction {
  PoitsFormula formula;
  Rat slope_gap;    // smallest slope difference within any gadget
  Rat spacing;      // vertical distance between consecutive gadget centers
  Rat max_slope;    // largest absolute slope used
  Rat epsilon;      // uniform flank distance shared by all gadgets

  std::vector<SelectionGadgetSpec> clause_gadgets;    // j = 1..m at +j*spacing
  std::vector<SelectionGadgetSpec> variable_gadgets;  // i = 1..n at -i*spacing

  struct ConsistencyPoint {
    int clause = 0;    // j
    int slot = 0;      // r
    int variable = 0;  // the literal at that slot
    nets::LabeledPoint point;
  };
  std::vector<ConsistencyPoint> consistency_points;  // 3m, label 1

  struct CatalogEntry {
    LeveeId id;
    Rat slope;
    Rat offset;
  };
  std::vector<CatalogEntry> levee_catalog;  // 3m + 2n
};

GlobalConstruction build_global_construction(const PoitsFormula& formula);

/// Ids of the catalog levees that are nonzero at the consistency point
/// (clause, slot); on a sound construction this is exactly the matching
/// clause levee and the +1-slope levee of the literal's variable.
std::vector<LeveeId> nonzero_levees_at(const GlobalConstruction& construction, int clause,
                                       int slot);

/// Rectifier training instance with k = 4(m+n): all gadget points plus the
/// 3m consistency points. Exact coordinate duplicates are merged; a label
/// conflict on merge reports a construction failure.
nets::Instance poits_reduction(const PoitsFormula& formula);

/// Threshold variant with k = 2(m+n) over the pruned gadget tables.
nets::Instance poits_reduction_lt(const PoitsFormula& formula);

/// Levee sum induced by an assignment: slope -1 for true variables, +1 for
/// false ones, and each clause's slope picked by its unique true literal.
/// Assignments that are not witnesses fall back to the first true literal
/// (slot 1 when none); use the solution builders to enforce validity.
nets::ReluNetwork poits_candidate_network(const PoitsFormula& formula,
                                          const TruthAssignment& assignment);
nets::LTNetwork poits_candidate_lt(const PoitsFormula& formula,
                                   const TruthAssignment& assignment);

/// Witness builders; throw std::invalid_argument unless poits_verify holds.
nets::ReluNetwork poits_solution_network(const PoitsFormula& formula,
                                         const TruthAssignment& assignment);
nets::LTNetwork poits_solution_lt(const PoitsFormula& formula,
                                  const TruthAssignment& assignment);

struct HsepWitness {
  std::vector<Rat> h1;
  Rat o1;
  std::vector<Rat> h2;
  Rat o2;
};

/// Two point sets to be strictly separated by two hyperplanes, optionally
/// with candidate hyperplanes attached.
struct HsepInput {
  std::vector<std::vector<Rat>> q_points;
  std::vector<std::vector<Rat>> p_points;
  std::optional<HsepWitness> witness;

  /// Throws std::invalid_argument when a set is empty or widths differ.
  void validate() const;
  bool disjoint() const;
  int dim() const;
  /// Number of distinct input points m.
  int total_points() const;
  /// Margin requirement m^-3.
  Rat epsilon() const;
};

/// Checks the witness hyperplanes exactly: every q strictly between them
/// (positive side of the first, negative of the second), every p on equal
/// sides of both, and every input point at distance more than epsilon from
/// each hyperplane (squared comparison, no radicals).
/// Throws std::invalid_argument when no witness is attached.
bool hsep_check_separation(const HsepInput& input);

/// Rectifier instance with k = 4 over dim(input) inputs: (q,1), (p,0), and
/// for every pair the two segment points near q (label 1) and near p
/// (label 0) at mixing weight epsilon / (2 * l1(q - p)).
/// Throws std::invalid_argument when the sets intersect.
nets::Instance hsep_reduction(const HsepInput& input);

/// Four-unit double-step witness network; requires hsep_check_separation.
/// Each hyperplane is rescaled by its largest absolute coefficient before the
/// step slope 4/epsilon is applied, keeping every margin argument intact for
/// rational inputs.
nets::ReluNetwork hsep_solution_network(const HsepInput& input);

}  // namespace exactfit::reduce
