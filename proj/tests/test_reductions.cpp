#include "exactfit/reductions.hpp"

#include "exactfit/nets.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using exactfit::Rat;
using namespace exactfit;
using namespace exactfit::reduce;

namespace {

const PoitsFormula& fig4_formula() {
  static const PoitsFormula formula{5, {{5, 4, 3}, {4, 3, 2}, {5, 2, 1}}};
  return formula;
}

SelectionGadgetSpec symmetric_gadget() {
  return {{Rat(-1), Rat(0), Rat(1)}, Rat(0), Rat(1) / Rat(3)};
}

bool contains_point(const std::vector<nets::LabeledPoint>& pts, const Rat& x1, const Rat& x2,
                    const Rat& y) {
  return std::any_of(pts.begin(), pts.end(), [&](const nets::LabeledPoint& p) {
    return p.x[0] == x1 && p.x[1] == x2 && p.y == y;
  });
}

}  // namespace

TEST_CASE("one-in-three verification counts literal slots") {
  const PoitsFormula& f = fig4_formula();
  CHECK(poits_verify(f, {{1, 3}}));
  CHECK(!poits_verify(f, {{}}));
  CHECK(!poits_verify(f, {{3, 4}}));
  CHECK(!poits_verify(f, {{1, 2, 3, 4, 5}}));

  PoitsFormula repeated{2, {{1, 1, 2}}};
  CHECK(!poits_verify(repeated, {{1}}));  // two true slots
  CHECK(poits_verify(repeated, {{2}}));
}

TEST_CASE("formula validation") {
  CHECK_THROWS_AS(PoitsFormula{}.validate(), std::invalid_argument);
  PoitsFormula bad{2, {{1, 2, 3}}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("selection gadget emits the documented tables") {
  auto pts = selection_gadget_points(symmetric_gadget());
  CHECK(pts.size() == 35);  // 13 + 9 + 9 + 2*(3-1)
  CHECK(contains_point(pts, Rat(0), Rat(-5) / Rat(3), Rat(1) / Rat(3)));
  // Left flank, label-1 row shifted by the lowest slope.
  CHECK(contains_point(pts, Rat(-1) / Rat(3), Rat(-2) / Rat(3), Rat(1)));
  // First pinch point on the right.
  CHECK(contains_point(pts, Rat(4), Rat(-2), Rat(0)));

  SUBCASE("offset translates everything vertically") {
    SelectionGadgetSpec shifted = symmetric_gadget();
    shifted.offset = Rat(10);
    auto moved = selection_gadget_points(shifted);
    CHECK(contains_point(moved, Rat(0), Rat(10) - Rat(5) / Rat(3), Rat(1) / Rat(3)));
  }

  SUBCASE("threshold variant drops the four ramp samples") {
    auto lt = selection_gadget_points_lt(symmetric_gadget());
    CHECK(lt.size() == 31);
    CHECK(!contains_point(lt, Rat(0), Rat(-5) / Rat(3), Rat(1) / Rat(3)));
    CHECK(contains_point(lt, Rat(0), Rat(2), Rat(0)));
    CHECK(contains_point(lt, Rat(0), Rat(-2), Rat(0)));
  }

  SUBCASE("epsilon bound is enforced") {
    SelectionGadgetSpec bad = symmetric_gadget();
    bad.epsilon = Rat(1) / Rat(2);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    SelectionGadgetSpec zero_end{{Rat(0), Rat(1)}, Rat(0), Rat(1) / Rat(3)};
    CHECK_NOTHROW(zero_end.validate());
  }
}

TEST_CASE("every listed slope fits the gadget, nearby slopes do not") {
  auto spec = symmetric_gadget();
  auto pts = selection_gadget_points(spec);
  for (const Rat& s : spec.slopes) {
    nets::ReluNetwork levee = nets::levee_network(s, spec.offset);
    for (const nets::LabeledPoint& p : pts) CHECK(nets::eval_relu(levee, p.x) == p.y);
  }
  for (Rat s : {Rat(1) / Rat(2), Rat(-1) / Rat(2), Rat(1) / Rat(3), Rat(-2) / Rat(3),
                Rat(1) / Rat(5), Rat(3) / Rat(4)}) {
    nets::ReluNetwork levee = nets::levee_network(s, spec.offset);
    int mismatches = 0;
    for (const nets::LabeledPoint& p : pts)
      if (nets::eval_relu(levee, p.x) != p.y) ++mismatches;
    CHECK(mismatches > 0);
  }

  // The threshold stripes fit the pruned tables the same way.
  auto lt_pts = selection_gadget_points_lt(spec);
  for (const Rat& s : spec.slopes) {
    nets::LTNetwork stripe = nets::stripe_network(s, spec.offset);
    for (const nets::LabeledPoint& p : lt_pts) CHECK(nets::eval_lt(stripe, p.x) == p.y);
  }
}

TEST_CASE("global construction constants and spacing") {
  GlobalConstruction g = build_global_construction(fig4_formula());
  CHECK(g.slope_gap == Rat(1) / Rat(6));
  CHECK(g.spacing == 54);
  CHECK(g.epsilon == Rat(1) / Rat(3));
  CHECK(g.max_slope == 1);
  CHECK(g.clause_gadgets.size() == 3);
  CHECK(g.variable_gadgets.size() == 5);
  CHECK(g.levee_catalog.size() == 3 * 3 + 2 * 5);

  // Clause slopes walk upward in slope_gap steps inside [-1, 0].
  CHECK(g.clause_gadgets[0].slopes == std::vector<Rat>{Rat(-1), Rat(-5) / Rat(6), Rat(-2) / Rat(3)});
  CHECK(g.clause_gadgets[2].slopes == std::vector<Rat>{Rat(-1) / Rat(3), Rat(-1) / Rat(6), Rat(0)});

  // Consecutive gadget centers differ by at least 8*S/gap + 6.
  std::vector<Rat> offsets;
  for (const auto& spec : g.clause_gadgets) offsets.push_back(spec.offset);
  for (const auto& spec : g.variable_gadgets) offsets.push_back(spec.offset);
  std::sort(offsets.begin(), offsets.end());
  Rat min_gap = Rat(8) * g.max_slope / g.slope_gap + 6;
  for (std::size_t i = 1; i < offsets.size(); ++i)
    CHECK(offsets[i] - offsets[i - 1] >= min_gap);

  // The documented consistency point for the first literal of clause 1.
  bool found = false;
  for (const auto& cp : g.consistency_points) {
    if (cp.clause == 1 && cp.slot == 1) {
      CHECK(cp.variable == 5);
      CHECK(cp.point.x[0] == 162);
      CHECK(cp.point.x[1] == -108);
      CHECK(cp.point.y == 1);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("exactly two levees are nonzero at each consistency point") {
  GlobalConstruction g = build_global_construction(fig4_formula());
  for (const auto& cp : g.consistency_points) {
    auto ids = nonzero_levees_at(g, cp.clause, cp.slot);
    REQUIRE(ids.size() == 2);
    std::set<LeveeId> expected{{LeveeId::Kind::Clause, cp.clause, cp.slot},
                               {LeveeId::Kind::Variable, cp.variable, +1}};
    CHECK(std::set<LeveeId>(ids.begin(), ids.end()) == expected);
    // Both catalog levees attain exactly 1 there.
    for (const auto& entry : g.levee_catalog) {
      if (std::find(ids.begin(), ids.end(), entry.id) == ids.end()) continue;
      CHECK(nets::levee_value(entry.slope, cp.point.x[0], Rat(cp.point.x[1] - entry.offset)) == 1);
    }
  }
}

TEST_CASE("formula reduction emits the documented instance") {
  nets::Instance inst = poits_reduction(fig4_formula());
  CHECK(inst.dim == 2);
  CHECK(inst.k == 32);
  CHECK(inst.gamma == 0);
  CHECK(inst.activation == nets::Activation::Relu);
  CHECK(inst.points.size() == 279);  // 3*35 + 5*33 + 9

  PoitsFormula small{3, {{1, 2, 3}}};
  CHECK(poits_reduction(small).k == 16);

  nets::Instance lt = poits_reduction_lt(fig4_formula());
  CHECK(lt.k == 16);
  CHECK(lt.activation == nets::Activation::LinearThreshold);
  CHECK(lt.points.size() == 247);  // 3*31 + 5*29 + 9
}

TEST_CASE("witness networks fit their reductions exactly") {
  const PoitsFormula& f = fig4_formula();
  const TruthAssignment t13{{1, 3}};

  nets::Instance inst = poits_reduction(f);
  nets::ReluNetwork net = poits_solution_network(f, t13);
  CHECK(net.units.size() == 32);
  CHECK(nets::is_exact_fit(net, inst));

  nets::Instance lt_inst = poits_reduction_lt(f);
  nets::LTNetwork lt_net = poits_solution_lt(f, t13);
  CHECK(lt_net.units.size() == 16);
  CHECK(nets::is_exact_fit(lt_net, lt_inst));

  SUBCASE("single-clause formula") {
    PoitsFormula small{3, {{1, 2, 3}}};
    TruthAssignment t2{{2}};
    CHECK(nets::is_exact_fit(poits_solution_network(small, t2), poits_reduction(small)));
    nets::LTNetwork small_lt = poits_solution_lt(small, t2);
    CHECK(small_lt.units.size() == 8);
    CHECK(nets::is_exact_fit(small_lt, poits_reduction_lt(small)));
  }

  SUBCASE("non-witness assignments are rejected by the solution builders") {
    CHECK_THROWS_AS(poits_solution_network(f, TruthAssignment{{1, 2, 3, 4, 5}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(poits_solution_lt(f, TruthAssignment{{}}), std::invalid_argument);
  }

  SUBCASE("candidate networks from non-witnesses miss a consistency point") {
    GlobalConstruction g = build_global_construction(f);
    nets::ReluNetwork bad = poits_candidate_network(f, TruthAssignment{{1, 2, 3, 4, 5}});
    int bad_consistency = 0;
    for (const auto& cp : g.consistency_points)
      if (nets::eval_relu(bad, cp.point.x) != cp.point.y) ++bad_consistency;
    CHECK(bad_consistency > 0);

    nets::LTNetwork bad_lt = poits_candidate_lt(f, TruthAssignment{{1, 2, 3, 4, 5}});
    int bad_lt_consistency = 0;
    for (const auto& cp : g.consistency_points)
      if (nets::eval_lt(bad_lt, cp.point.x) != cp.point.y) ++bad_lt_consistency;
    CHECK(bad_lt_consistency > 0);
  }
}

namespace {

HsepInput golden_hsep() {
  HsepInput input;
  input.q_points = {{Rat(1), Rat(1)}};
  input.p_points = {{Rat(-1), Rat(-1)}, {Rat(3), Rat(3)}};
  input.witness = HsepWitness{{Rat(1), Rat(1)},
                              Rat(-1) / Rat(4),
                              {Rat(1), Rat(1)},
                              Rat(-15) / Rat(4)};
  return input;
}

}  // namespace

TEST_CASE("separation checks on the golden instance") {
  HsepInput golden = golden_hsep();
  CHECK(golden.total_points() == 3);
  CHECK(golden.epsilon() == Rat(1) / Rat(27));
  CHECK(hsep_check_separation(golden));

  SUBCASE("missing witness") {
    HsepInput bare = golden;
    bare.witness.reset();
    CHECK_THROWS_AS(hsep_check_separation(bare), std::invalid_argument);
  }
  SUBCASE("overlapping sets can never be separated") {
    HsepInput overlap;
    overlap.q_points = {{Rat(0)}};
    overlap.p_points = {{Rat(0)}};
    overlap.witness = HsepWitness{{Rat(1)}, Rat(1), {Rat(1)}, Rat(-1)};
    CHECK(!hsep_check_separation(overlap));
    CHECK_THROWS_AS(hsep_reduction(overlap), std::invalid_argument);
  }
  SUBCASE("a point exactly on a hyperplane fails strictness") {
    HsepInput touching = golden;
    touching.q_points.push_back({Rat(0), Rat(1) / Rat(4)});  // h1 . x + o1 = 0
    CHECK(!hsep_check_separation(touching));
  }
  SUBCASE("a sign-inconsistent far side fails the equal-sign condition") {
    HsepInput bad = golden;
    bad.witness->o2 = Rat(-7);  // (3,3) now sits on opposite sides of the two planes
    CHECK(!hsep_check_separation(bad));
  }
}

TEST_CASE("separation reduction emits the documented points") {
  SUBCASE("counts") {
    HsepInput one_one;
    one_one.q_points = {{Rat(0)}};
    one_one.p_points = {{Rat(1)}};
    CHECK(hsep_reduction(one_one).points.size() == 4);

    HsepInput two_two;
    two_two.q_points = {{Rat(0), Rat(0)}, {Rat(0), Rat(1)}};
    two_two.p_points = {{Rat(5), Rat(0)}, {Rat(5), Rat(1)}};
    CHECK(hsep_reduction(two_two).points.size() == 12);
  }

  nets::Instance inst = hsep_reduction(golden_hsep());
  CHECK(inst.dim == 2);
  CHECK(inst.k == 4);
  CHECK(inst.points.size() == 7);  // 1 + 2 + 2*2

  SUBCASE("segment points sit strictly between their endpoints, nearer their anchor") {
    HsepInput golden = golden_hsep();
    const auto& q = golden.q_points[0];
    for (const auto& p : golden.p_points) {
      // mix = eps / (2 * l1(q - p)) < 1/2 for three input points.
      Rat l1(0);
      for (std::size_t t = 0; t < q.size(); ++t) l1 += abs(Rat(q[t] - p[t]));
      Rat mix = golden.epsilon() / (2 * l1);
      CHECK(mix > 0);
      CHECK(mix < Rat(1) / Rat(2));
    }
  }
}

TEST_CASE("double-step network fits the golden reduction exactly") {
  HsepInput golden = golden_hsep();
  nets::Instance inst = hsep_reduction(golden);
  nets::ReluNetwork net = hsep_solution_network(golden);
  REQUIRE(net.units.size() == 4);
  CHECK(nets::is_exact_fit(net, inst));

  for (const auto& q : golden.q_points) CHECK(nets::eval_relu(net, q) == 1);
  for (const auto& p : golden.p_points) CHECK(nets::eval_relu(net, p) == 0);

  SUBCASE("segment points land strictly on their anchor's side of all four planes") {
    for (const nets::LabeledPoint& point : inst.points) {
      if (point.y == 1) {
        CHECK(nets::eval_relu(net, point.x) == 1);
      } else {
        CHECK(nets::eval_relu(net, point.x) == 0);
      }
    }
    // Sign pattern of every unit at the near-q points matches q itself.
    const auto& q = golden.q_points[0];
    for (const nets::LabeledPoint& point : inst.points) {
      if (point.y != 1) continue;
      for (const nets::Unit& u : net.units) {
        Rat at_point = u.b, at_q = u.b;
        for (std::size_t t = 0; t < u.w.size(); ++t) {
          at_point += u.w[t] * point.x[t];
          at_q += u.w[t] * q[t];
        }
        CHECK(at_point != 0);
        CHECK((at_point > 0) == (at_q > 0));
      }
    }
  }

  SUBCASE("a rejected witness refuses to build") {
    HsepInput bad = golden;
    bad.witness->o1 = Rat(-10);
    CHECK_THROWS_AS(hsep_solution_network(bad), std::invalid_argument);
  }

  SUBCASE("a tiny-normal witness still fits after rescaling") {
    HsepInput scaled = golden;
    scaled.witness->h1 = {Rat(1) / Rat(100), Rat(1) / Rat(100)};
    scaled.witness->o1 = Rat(-1) / Rat(400);
    REQUIRE(hsep_check_separation(scaled));
    nets::ReluNetwork net2 = hsep_solution_network(scaled);
    CHECK(nets::is_exact_fit(net2, hsep_reduction(scaled)));
  }
}
