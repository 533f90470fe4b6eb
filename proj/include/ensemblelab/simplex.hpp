#ifndef ENSEMBLELAB_SIMPLEX_HPP
#define ENSEMBLELAB_SIMPLEX_HPP

#include "ensemblelab/types.hpp"

namespace ensemblelab {

// Dense two-phase primal simplex for min c.x s.t. Ax = b, x >= 0, with
// Bland's anti-cycling rule. Instances here are tiny (a few hundred
// variables), so a full-tableau implementation is deliberate: deterministic,
// no external solver.
struct LinearProgram {
  Matrix A;  // m x n
  Vector b;  // m
  Vector c;  // n
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  Vector x;
  double objective = 0.0;
  int iterations = 0;
};

const char* to_string(LpStatus status);

LpSolution solve_lp(const LinearProgram& lp,
                    double eps = ToleranceConfig{}.lp,
                    int max_iterations = 200000);

}  // namespace ensemblelab

#endif  // ENSEMBLELAB_SIMPLEX_HPP
