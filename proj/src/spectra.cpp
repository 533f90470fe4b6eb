#include "ensemblelab/spectra.hpp"

#include <cmath>
#include <random>

#include "ensemblelab/simplex.hpp"

namespace ensemblelab {

Vector expectation(const DiagonalState& state, const ObservableSet& obs) {
  if (state.size() != obs.levels())
    throw DimensionMismatch("state dimension does not match level count");
  return obs.charges() * state.p();
}

bool is_compatible(const DiagonalState& state, const Macrostate& m,
                   double tol) {
  if (tol <= 0.0) throw InvalidState("compatibility tolerance must be > 0");
  const Vector v = expectation(state, m.observables());
  return ((v - m.values()).cwiseAbs().maxCoeff() <= tol);
}

double shannon_entropy(const DiagonalState& state) {
  double s = 0.0;
  for (int i = 0; i < state.size(); ++i) {
    const double p = state.p()[i];
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

namespace {

double uniform01(std::mt19937_64& eng) {
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1p-53;
}

// Constraint system of the equivalence class: rows are the normalization and
// the n moment constraints.
struct ClassConstraints {
  Matrix C;  // (n+1) x d
  Vector b;  // n+1

  explicit ClassConstraints(const Macrostate& m) {
    const auto& obs = m.observables();
    const int d = obs.levels(), n = obs.observables();
    C.resize(n + 1, d);
    C.row(0).setOnes();
    C.bottomRows(n) = obs.charges();
    b.resize(n + 1);
    b[0] = 1.0;
    b.tail(n) = m.values();
  }
};

// Extreme value of p_coord over the class, or the feasibility certificate
// itself when coord < 0.
LpSolution class_lp(const ClassConstraints& cc, int coord, bool maximize) {
  LinearProgram lp;
  lp.A = cc.C;
  lp.b = cc.b;
  lp.c = Vector::Zero(cc.C.cols());
  if (coord >= 0) lp.c[coord] = maximize ? -1.0 : 1.0;
  return solve_lp(lp);
}

}  // namespace

int equivalence_class_dim(const Macrostate& m) {
  const ClassConstraints cc(m);
  const int d = m.observables().levels();

  std::vector<int> support;
  for (int a = 0; a < d; ++a) {
    const LpSolution sol = class_lp(cc, a, /*maximize=*/true);
    if (sol.status == LpStatus::Infeasible)
      throw InfeasibleMacrostate("no probability vector matches the values");
    if (sol.status != LpStatus::Optimal)
      throw SolverFailure(std::string("class LP: ") + to_string(sol.status));
    if (sol.x[a] > 1e-9) support.push_back(a);
  }

  Matrix cs(cc.C.rows(), support.size());
  for (std::size_t i = 0; i < support.size(); ++i)
    cs.col(i) = cc.C.col(support[i]);
  Eigen::ColPivHouseholderQR<Matrix> qr(cs);
  qr.setThreshold(1e-10);
  return static_cast<int>(support.size()) - static_cast<int>(qr.rank());
}

std::vector<DiagonalState> sample_compatible(const Macrostate& m, int count,
                                             std::uint64_t seed,
                                             const SampleOptions& opts) {
  if (count < 1) throw InvalidState("sample count must be >= 1");
  const auto& obs = m.observables();
  const int d = obs.levels();
  const ClassConstraints cc(m);

  const LpSolution feasible = class_lp(cc, -1, false);
  if (feasible.status == LpStatus::Infeasible)
    throw InfeasibleMacrostate("no probability vector matches the values");
  if (feasible.status != LpStatus::Optimal)
    throw SolverFailure(std::string("feasibility LP: ") +
                        to_string(feasible.status));

  if (equivalence_class_dim(m) == 0) {
    // Singleton class: the unique member is the only possible output.
    return {DiagonalState(feasible.x.cwiseMax(0.0), 1e-9)};
  }

  // Affine projector onto C p = b (minimum-norm correction).
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(cc.C);
  const auto project = [&](const Vector& p) -> Vector {
    return p - cod.solve((cc.C * p - cc.b).eval());
  };

  // Strictly positive anchor on the constraint set: mean of the
  // per-coordinate maximizers, which lies in the relative interior.
  Vector anchor = Vector::Zero(d);
  for (int a = 0; a < d; ++a) anchor += class_lp(cc, a, true).x;
  anchor /= static_cast<double>(d);
  anchor = project(anchor);

  std::mt19937_64 eng(seed);
  std::vector<DiagonalState> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    Vector candidate;
    bool found = false;
    for (int attempt = 0; attempt < opts.max_retries_per_sample; ++attempt) {
      Vector p(d);
      for (int i = 0; i < d; ++i) p[i] = -std::log(uniform01(eng));
      p /= p.sum();
      candidate = project(p);
      if (candidate.minCoeff() >= 0.0) {
        found = true;
        break;
      }
    }
    if (!found) {
      // Pull the last projected point back toward the interior anchor; the
      // combination stays on the constraint set.
      double t = 1.0;
      for (int i = 0; i < d; ++i) {
        if (candidate[i] < 0.0)
          t = std::min(t, anchor[i] / (anchor[i] - candidate[i]));
      }
      candidate = anchor + 0.95 * t * (candidate - anchor);
      if (candidate.minCoeff() < -1e-12)
        throw SamplingExhausted("could not draw a compatible state");
      candidate = candidate.cwiseMax(0.0);
    }
    DiagonalState state(candidate, 1e-9);
    if (!is_compatible(state, m, opts.compatibility))
      throw SamplingExhausted("projected sample failed compatibility");
    out.push_back(std::move(state));
  }
  return out;
}

DiagonalState dephase(const HermitianState& rho, const ObservableSet& obs) {
  if (rho.size() != obs.levels())
    throw DimensionMismatch("density matrix does not match level count");
  const int d = obs.levels();

  // Group levels whose full charge columns coincide exactly.
  std::vector<int> block(d, -1);
  std::vector<std::vector<int>> blocks;
  for (int k = 0; k < d; ++k) {
    for (std::size_t g = 0; g < blocks.size(); ++g) {
      if ((obs.charges().col(k).array() ==
           obs.charges().col(blocks[g][0]).array()).all()) {
        block[k] = static_cast<int>(g);
        break;
      }
    }
    if (block[k] < 0) {
      block[k] = static_cast<int>(blocks.size());
      blocks.push_back({});
    }
    blocks[block[k]].push_back(k);
  }

  Vector p(d);
  for (const auto& levels : blocks) {
    double mass = 0.0;
    for (int k : levels) mass += rho.matrix()(k, k).real();
    for (int k : levels) p[k] = mass / static_cast<double>(levels.size());
  }
  return DiagonalState(p.cwiseMax(0.0), 1e-9);
}

}  // namespace ensemblelab
