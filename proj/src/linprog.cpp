#include "exactfit/linprog.hpp"

#include <cassert>
#include <stdexcept>
#include <utility>

namespace exactfit::lp {

void Polyhedron::add(LinearConstraint c) {
  if (static_cast<int>(c.coeffs.size()) != num_vars)
    throw std::invalid_argument("constraint width does not match polyhedron");
  if (c.rel == Rel::Lt || c.rel == Rel::Gt)
    throw std::invalid_argument("strict relation not allowed in a polyhedron");
  constraints.push_back(std::move(c));
}

namespace {

// Dense simplex tableau in the standard form  min c.z  s.t.  A z = b, z >= 0,
// b >= 0. Free variables are split beforehand, so columns are
// [0, 2n): structural pairs, [2n, 2n+m): slacks, then artificials.
struct Tableau {
  std::vector<std::vector<Rat>> a;  // m x cols
  std::vector<Rat> b;               // m, kept nonnegative
  std::vector<int> basis;           // m, column basic in each row
  std::vector<bool> artificial;     // per column; artificials never re-enter
  int cols = 0;

  int rows() const { return static_cast<int>(a.size()); }

  void pivot(int row, int col) {
    Rat p = a[row][col];
    assert(p != 0);
    for (int j = 0; j < cols; ++j) a[row][j] /= p;
    b[row] /= p;
    for (int r = 0; r < rows(); ++r) {
      if (r == row || a[r][col] == 0) continue;
      Rat f = a[r][col];
      for (int j = 0; j < cols; ++j) a[r][j] -= f * a[row][j];
      b[r] -= f * b[row];
    }
    basis[row] = col;
  }

  // Minimizes cost.z from the current basis. Returns false iff unbounded.
  bool run(const std::vector<Rat>& cost, Rat& objective_out) {
    // Reduced costs r_j = c_j - c_B B^{-1} A_j recomputed from the tableau.
    std::vector<Rat> reduced(cost);
    Rat value(0);
    for (int r = 0; r < rows(); ++r) {
      const Rat& cb = cost[basis[r]];
      if (cb == 0) continue;
      value += cb * b[r];
      for (int j = 0; j < cols; ++j)
        if (a[r][j] != 0) reduced[j] -= cb * a[r][j];
    }
    for (;;) {
      int enter = -1;
      for (int j = 0; j < cols; ++j) {
        if (artificial[j]) continue;
        if (reduced[j] < 0) { enter = j; break; }  // Bland: lowest index
      }
      if (enter < 0) { objective_out = value; return true; }

      int leave = -1;
      Rat best_ratio;
      for (int r = 0; r < rows(); ++r) {
        if (a[r][enter] <= 0) continue;
        Rat ratio = b[r] / a[r][enter];
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis[r] < basis[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return false;

      Rat step = reduced[enter];
      pivot(leave, enter);
      value += step * b[leave];
      for (int j = 0; j < cols; ++j)
        if (a[leave][j] != 0) reduced[j] -= step * a[leave][j];
    }
  }
};

// One <=-row over the original free variables.
struct Row {
  std::vector<Rat> coeffs;
  Rat rhs;
};

std::vector<Row> as_le_rows(const Polyhedron& poly) {
  std::vector<Row> rows;
  rows.reserve(poly.constraints.size());
  for (const LinearConstraint& c : poly.constraints) {
    switch (c.rel) {
      case Rel::Le:
        rows.push_back({c.coeffs, c.rhs});
        break;
      case Rel::Ge: {
        Row r{c.coeffs, -c.rhs};
        for (Rat& v : r.coeffs) v = -v;
        rows.push_back(std::move(r));
        break;
      }
      case Rel::Eq: {
        rows.push_back({c.coeffs, c.rhs});
        Row r{c.coeffs, -c.rhs};
        for (Rat& v : r.coeffs) v = -v;
        rows.push_back(std::move(r));
        break;
      }
      case Rel::Lt:
      case Rel::Gt:
        throw std::logic_error("strict row reached the solver");
    }
  }
  return rows;
}

}  // namespace

LpOutcome solve_lp(const Polyhedron& poly, const std::vector<Rat>& objective, Sense sense) {
  if (static_cast<int>(objective.size()) != poly.num_vars)
    throw std::invalid_argument("objective width does not match polyhedron");

  const int n = poly.num_vars;
  std::vector<Row> rows = as_le_rows(poly);
  const int m = static_cast<int>(rows.size());

  std::vector<int> needs_artificial;
  for (int r = 0; r < m; ++r)
    if (rows[r].rhs < 0) needs_artificial.push_back(r);

  Tableau t;
  t.cols = 2 * n + m + static_cast<int>(needs_artificial.size());
  t.a.assign(m, std::vector<Rat>(t.cols, Rat(0)));
  t.b.assign(m, Rat(0));
  t.basis.assign(m, -1);
  t.artificial.assign(t.cols, false);

  for (int r = 0; r < m; ++r) {
    const int sign = rows[r].rhs < 0 ? -1 : 1;
    for (int i = 0; i < n; ++i) {
      if (rows[r].coeffs[i] == 0) continue;
      Rat v = sign * rows[r].coeffs[i];
      t.a[r][2 * i] = v;
      t.a[r][2 * i + 1] = -v;
    }
    t.a[r][2 * n + r] = Rat(sign);
    t.b[r] = sign * rows[r].rhs;
    if (sign > 0) t.basis[r] = 2 * n + r;
  }
  for (std::size_t q = 0; q < needs_artificial.size(); ++q) {
    const int r = needs_artificial[q];
    const int col = 2 * n + m + static_cast<int>(q);
    t.a[r][col] = Rat(1);
    t.basis[r] = col;
    t.artificial[col] = true;
  }

  if (!needs_artificial.empty()) {
    std::vector<Rat> phase1(t.cols, Rat(0));
    for (int j = 0; j < t.cols; ++j)
      if (t.artificial[j]) phase1[j] = Rat(1);
    // Temporarily allow the artificial columns to be priced.
    std::vector<bool> saved = t.artificial;
    t.artificial.assign(t.cols, false);
    Rat infeas(0);
    bool bounded = t.run(phase1, infeas);
    assert(bounded);
    (void)bounded;
    t.artificial = std::move(saved);
    if (infeas != 0) return {Verdict::Infeasible, std::nullopt, std::nullopt};

    // Drive leftover artificials out of the basis; an all-zero row is redundant.
    std::vector<int> dead_rows;
    for (int r = 0; r < t.rows(); ++r) {
      if (!t.artificial[t.basis[r]]) continue;
      int col = -1;
      for (int j = 0; j < t.cols; ++j) {
        if (t.artificial[j]) continue;
        if (t.a[r][j] != 0) { col = j; break; }
      }
      if (col >= 0)
        t.pivot(r, col);
      else
        dead_rows.push_back(r);
    }
    for (auto it = dead_rows.rbegin(); it != dead_rows.rend(); ++it) {
      t.a.erase(t.a.begin() + *it);
      t.b.erase(t.b.begin() + *it);
      t.basis.erase(t.basis.begin() + *it);
    }
  }

  std::vector<Rat> cost(t.cols, Rat(0));
  for (int i = 0; i < n; ++i) {
    Rat c = sense == Sense::Max ? Rat(-objective[i]) : objective[i];
    cost[2 * i] = c;
    cost[2 * i + 1] = -c;
  }
  Rat value(0);
  if (!t.run(cost, value)) return {Verdict::Unbounded, std::nullopt, std::nullopt};

  std::vector<Rat> z(t.cols, Rat(0));
  for (int r = 0; r < t.rows(); ++r) z[t.basis[r]] = t.b[r];
  std::vector<Rat> witness(n, Rat(0));
  for (int i = 0; i < n; ++i) witness[i] = z[2 * i] - z[2 * i + 1];
  if (sense == Sense::Max) value = -value;
  return {Verdict::Optimal, value, std::move(witness)};
}

std::optional<std::vector<Rat>> feasible(const Polyhedron& poly) {
  LpOutcome out = solve_lp(poly, std::vector<Rat>(poly.num_vars, Rat(0)), Sense::Min);
  assert(out.verdict != Verdict::Unbounded);
  if (out.verdict != Verdict::Optimal) return std::nullopt;
  return out.witness;
}

std::optional<std::vector<Rat>> strictly_feasible(const std::vector<LinearConstraint>& constraints,
                                                  int num_vars) {
  const int slack = num_vars;
  Polyhedron relaxed(num_vars + 1);
  for (const LinearConstraint& c : constraints) {
    if (static_cast<int>(c.coeffs.size()) != num_vars)
      throw std::invalid_argument("constraint width does not match system");
    LinearConstraint widened{c.coeffs, c.rel, c.rhs};
    widened.coeffs.resize(num_vars + 1, Rat(0));
    switch (c.rel) {
      case Rel::Gt:  // a.x > b  ->  a.x - t >= b
        widened.coeffs[slack] = Rat(-1);
        widened.rel = Rel::Ge;
        break;
      case Rel::Lt:  // a.x < b  ->  a.x + t <= b
        widened.coeffs[slack] = Rat(1);
        widened.rel = Rel::Le;
        break;
      default:
        break;
    }
    relaxed.add(std::move(widened));
  }
  LinearConstraint cap{std::vector<Rat>(num_vars + 1, Rat(0)), Rel::Le, Rat(1)};
  cap.coeffs[slack] = Rat(1);
  relaxed.add(std::move(cap));

  std::vector<Rat> objective(num_vars + 1, Rat(0));
  objective[slack] = Rat(1);
  LpOutcome out = solve_lp(relaxed, objective, Sense::Max);
  assert(out.verdict != Verdict::Unbounded);  // the cap bounds the objective
  if (out.verdict != Verdict::Optimal || *out.value <= 0) return std::nullopt;
  std::vector<Rat> witness(out.witness->begin(), out.witness->begin() + num_vars);
  return witness;
}

}  // namespace exactfit::lp
