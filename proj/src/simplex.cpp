#include "ensemblelab/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ensemblelab {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

// Tableau layout: rows 0..m-1 hold the constraints, row m holds reduced
// costs, column n holds the right-hand side. basis[i] is the variable owning
// row i.
struct Tableau {
  Matrix t;
  std::vector<int> basis;
  int m, n;

  void pivot(int row, int col) {
    t.row(row) /= t(row, col);
    for (int r = 0; r <= m; ++r) {
      if (r == row) continue;
      const double f = t(r, col);
      if (f != 0.0) t.row(r) -= f * t.row(row);
    }
    basis[row] = col;
  }

  // Bland's rule: entering = lowest-index column with negative reduced cost,
  // leaving = lowest-index basic variable among the min-ratio rows.
  LpStatus iterate(double eps, int max_iterations, int& iterations) {
    while (iterations < max_iterations) {
      int col = -1;
      for (int j = 0; j < n; ++j) {
        if (t(m, j) < -eps) { col = j; break; }
      }
      if (col < 0) return LpStatus::Optimal;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m; ++r)
        if (t(r, col) > eps) best = std::min(best, t(r, n) / t(r, col));
      if (!std::isfinite(best)) return LpStatus::Unbounded;
      int row = -1;
      for (int r = 0; r < m; ++r) {
        if (t(r, col) > eps && t(r, n) / t(r, col) <= best + eps &&
            (row < 0 || basis[r] < basis[row]))
          row = r;
      }
      pivot(row, col);
      ++iterations;
    }
    return LpStatus::IterationLimit;
  }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, double eps, int max_iterations) {
  const int m = static_cast<int>(lp.A.rows());
  const int n = static_cast<int>(lp.A.cols());
  if (lp.b.size() != m || lp.c.size() != n)
    throw DimensionMismatch("inconsistent LP dimensions");

  LpSolution sol;
  sol.x = Vector::Zero(n);

  // Phase 1: artificial variable per row, minimize their sum.
  Tableau tab;
  tab.m = m;
  tab.n = n + m;
  tab.t = Matrix::Zero(m + 1, tab.n + 1);
  tab.basis.resize(m);
  for (int r = 0; r < m; ++r) {
    const double sign = lp.b[r] < 0.0 ? -1.0 : 1.0;
    tab.t.block(r, 0, 1, n) = sign * lp.A.row(r);
    tab.t(r, n + r) = 1.0;
    tab.t(r, tab.n) = sign * lp.b[r];
    tab.basis[r] = n + r;
  }
  for (int j = 0; j < n; ++j) tab.t(m, j) = -tab.t.block(0, j, m, 1).sum();
  tab.t(m, tab.n) = -tab.t.block(0, tab.n, m, 1).sum();

  LpStatus st = tab.iterate(eps, max_iterations, sol.iterations);
  if (st != LpStatus::Optimal) {
    sol.status = st;
    return sol;
  }
  if (std::abs(tab.t(m, tab.n)) > eps) {
    sol.status = LpStatus::Infeasible;
    return sol;
  }
  // Drive leftover artificial variables out of the basis; rows that cannot
  // pivot are redundant constraints and stay harmlessly degenerate.
  for (int r = 0; r < m; ++r) {
    if (tab.basis[r] >= n) {
      for (int j = 0; j < n; ++j) {
        if (std::abs(tab.t(r, j)) > eps) {
          tab.pivot(r, j);
          break;
        }
      }
    }
  }

  // Phase 2: original objective on the phase-1 basis, artificial columns
  // frozen at zero.
  Tableau tab2;
  tab2.m = m;
  tab2.n = n;
  tab2.t = Matrix::Zero(m + 1, n + 1);
  tab2.t.block(0, 0, m, n) = tab.t.block(0, 0, m, n);
  tab2.t.block(0, n, m, 1) = tab.t.block(0, tab.n, m, 1);
  tab2.basis = tab.basis;
  for (int r = 0; r < m; ++r) {
    if (tab2.basis[r] >= n) {
      // Redundant row: zero it so it never constrains a pivot.
      tab2.t.row(r).setZero();
      tab2.basis[r] = -1;
    }
  }
  tab2.t.row(m).head(n) = lp.c.transpose();
  for (int r = 0; r < m; ++r) {
    if (tab2.basis[r] >= 0) {
      const double f = tab2.t(m, tab2.basis[r]);
      if (f != 0.0) tab2.t.row(m) -= f * tab2.t.row(r);
    }
  }

  st = tab2.iterate(eps, max_iterations, sol.iterations);
  sol.status = st;
  if (st != LpStatus::Optimal) return sol;

  for (int r = 0; r < m; ++r)
    if (tab2.basis[r] >= 0) sol.x[tab2.basis[r]] = tab2.t(r, n);
  sol.objective = lp.c.dot(sol.x);
  return sol;
}

}  // namespace ensemblelab
