#include "ensemblelab/maxent.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "ensemblelab/spectra.hpp"

namespace ensemblelab {

double log_partition(const ObservableSet& obs, VectorRef beta) {
  if (beta.size() != obs.observables())
    throw DimensionMismatch("one multiplier per observable required");
  const Vector w = -(beta.transpose() * obs.charges()).transpose();
  const double shift = w.maxCoeff();
  return shift + std::log((w.array() - shift).exp().sum());
}

DiagonalState gibbs_state(const ObservableSet& obs, VectorRef beta) {
  if (beta.size() != obs.observables())
    throw DimensionMismatch("one multiplier per observable required");
  if (!beta.allFinite()) throw InvalidState("multipliers must be finite");
  const Vector w = -(beta.transpose() * obs.charges()).transpose();
  Vector p = (w.array() - w.maxCoeff()).exp();
  p /= p.sum();
  return DiagonalState(std::move(p));
}

DiagonalState gibbs_state(const ObservableSet& obs, double beta) {
  return gibbs_state(obs, Vector::Constant(1, beta));
}

Vector thermal_energy(const ObservableSet& obs, VectorRef beta) {
  return expectation(gibbs_state(obs, beta), obs);
}

double thermal_energy(const ObservableSet& obs, double beta) {
  return thermal_energy(obs, Vector::Constant(1, beta))[0];
}

namespace {

Vector moments(const ObservableSet& obs, const Vector& p) {
  return obs.charges() * p;
}

// Covariance matrix of the observables under p: the Hessian of the
// log-partition function.
Matrix covariance(const ObservableSet& obs, const Vector& p) {
  const Vector mean = moments(obs, p);
  const Matrix centered = obs.charges().colwise() - mean;
  return centered * p.asDiagonal() * centered.transpose();
}

Vector multiplier_caps(const ObservableSet& obs, double budget) {
  Vector caps(obs.observables());
  for (int j = 0; j < obs.observables(); ++j) {
    const double range = obs.maxCharge(j) - obs.minCharge(j);
    caps[j] = range > 0.0 ? budget / range
                          : std::numeric_limits<double>::infinity();
  }
  return caps;
}

// Directions c with c.Q affinely dependent on the identity; adding such a c
// to beta leaves the ensemble unchanged.
Matrix degenerate_directions(const ObservableSet& obs) {
  const int n = obs.observables();
  Matrix B(obs.levels(), n + 1);
  B.leftCols(n) = obs.charges().transpose();
  B.col(n).setConstant(-1.0);
  Eigen::FullPivLU<Matrix> lu(B);
  lu.setThreshold(1e-10);
  const Matrix kernel = lu.kernel();  // columns (c; a)
  if (lu.dimensionOfKernel() == 0) return Matrix(n, 0);
  Matrix dirs = kernel.topRows(n);
  // Orthonormalize via thin QR.
  Eigen::HouseholderQR<Matrix> qr(dirs);
  Matrix q = qr.householderQ() * Matrix::Identity(n, dirs.cols());
  return q;
}

}  // namespace

GibbsSolution fit_canonical(const ObservableSet& obs, double e,
                            const FitOptions& opts) {
  if (obs.observables() != 1)
    throw DimensionMismatch("fit_canonical requires a single observable");
  const Vector h = obs.spectrum();
  const double lo = h.minCoeff(), hi = h.maxCoeff();
  if (hi == lo) throw DegenerateSpectrum("all eigenvalues equal");
  if (!(e > lo && e < hi))
    throw OutOfRange("energy must lie strictly inside the spectral hull");
  const double cap = opts.multiplier_budget / (hi - lo);

  int iterations = 0;
  const auto energy_at = [&](double beta) {
    ++iterations;
    return thermal_energy(obs, beta);
  };

  // e(beta) is strictly decreasing; grow a sign-changing bracket from [-1,1].
  double a = -1.0, b = 1.0;
  while (energy_at(a) < e) {
    a *= 2.0;
    if (-a > cap)
      throw OutOfRange("multiplier cap reached; energy too close to the hull");
  }
  while (energy_at(b) > e) {
    b *= 2.0;
    if (b > cap)
      throw OutOfRange("multiplier cap reached; energy too close to the hull");
  }
  for (int i = 0; i < 200 && (b - a) > 1e-14 * (1.0 + std::abs(a) + std::abs(b));
       ++i) {
    const double mid = 0.5 * (a + b);
    (energy_at(mid) >= e ? a : b) = mid;
  }

  // Newton polish, keeping the best residual seen.
  double beta = 0.5 * (a + b);
  double best_beta = beta;
  double best_res = std::abs(thermal_energy(obs, beta) - e);
  for (int i = 0; i < 40; ++i) {
    const DiagonalState g = gibbs_state(obs, beta);
    const double mean = h.dot(g.p());
    const double var = covariance(obs, g.p())(0, 0);
    if (var <= 0.0) break;
    beta += (mean - e) / var;
    if (!std::isfinite(beta) || std::abs(beta) > cap) break;
    ++iterations;
    const double res = std::abs(thermal_energy(obs, beta) - e);
    if (res < best_res) {
      best_res = res;
      best_beta = beta;
    } else {
      break;
    }
  }

  if (best_res > opts.tol)
    throw SolverFailure("canonical fit residual " + std::to_string(best_res));
  GibbsSolution sol{Vector::Constant(1, best_beta), gibbs_state(obs, best_beta),
                    best_res, iterations, false};
  return sol;
}

GibbsSolution fit_gge(const ObservableSet& obs, VectorRef v,
                      const FitOptions& opts) {
  const int n = obs.observables();
  if (v.size() != n)
    throw DimensionMismatch("one target value per observable required");
  for (int j = 0; j < n; ++j) {
    if (v[j] < obs.minCharge(j) || v[j] > obs.maxCharge(j))
      throw OutOfRange("target value outside the spectral hull");
  }
  const Vector caps = multiplier_caps(obs, opts.multiplier_budget);
  const Matrix null_dirs = degenerate_directions(obs);
  const bool rank_deficient = null_dirs.cols() > 0;

  const auto dual = [&](const Vector& beta) {
    return log_partition(obs, beta) + beta.dot(v);
  };

  const double res_floor =
      1e-15 * (1.0 + v.cwiseAbs().maxCoeff() +
               obs.charges().cwiseAbs().maxCoeff());

  Vector beta = Vector::Zero(n);
  Vector best_beta = beta;
  double best_res = std::numeric_limits<double>::infinity();
  double prev_dual = dual(beta);
  int iterations = 0;
  int stalled = 0;

  for (int it = 0; it < opts.max_iterations; ++it) {
    const DiagonalState state = gibbs_state(obs, beta);
    const Vector mean = moments(obs, state.p());
    const Vector grad = v - mean;  // gradient of the dual
    const double res = grad.cwiseAbs().maxCoeff();
    if (res < best_res) {
      best_res = res;
      best_beta = beta;
    }
    if (res <= res_floor) break;

    const Matrix hess = covariance(obs, state.p());
    Eigen::SelfAdjointEigenSolver<Matrix> es(hess, Eigen::EigenvaluesOnly);
    const double eig_min = es.eigenvalues().minCoeff();
    const double eig_max = es.eigenvalues().maxCoeff();

    Vector dir;
    if (eig_max <= 0.0 || eig_min < eig_max / 1e12) {
      // Ill-conditioned covariance: minimum-norm Newton step, or plain
      // gradient descent when even that is degenerate.
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(hess);
      cod.setThreshold(1e-13);
      dir = -cod.solve(grad);
      if (!dir.allFinite() || dir.norm() == 0.0)
        dir = -grad / std::max(eig_max, 1e-12);
    } else {
      dir = -hess.ldlt().solve(grad);
    }

    // Backtracking line search on the dual. Improvements below floating
    // resolution of the dual count as accepted, otherwise the iterate can
    // freeze one ulp away from the optimum.
    const double f0 = dual(beta);
    const double slack = 4e-16 * (1.0 + std::abs(f0));
    const double slope = grad.dot(dir);
    double step = 1.0;
    Vector next = beta + dir;
    for (int ls = 0; ls < 60; ++ls) {
      next = beta + step * dir;
      if ((next.cwiseAbs().array() <= caps.array()).all() &&
          dual(next) <= f0 + 1e-4 * step * slope + slack)
        break;
      step *= 0.5;
    }
    if ((next.cwiseAbs().array() > caps.array()).any())
      throw OutOfRange("multiplier cap reached; values too close to the hull");
    if (next == beta) break;  // no representable progress left
    beta = next;
    ++iterations;

    // Stop once the dual has stopped moving at machine precision.
    const double new_dual = dual(beta);
    if (prev_dual - new_dual <= 1e-15 * (1.0 + std::abs(prev_dual))) {
      if (++stalled >= 2) break;
    } else {
      stalled = 0;
    }
    prev_dual = new_dual;
  }
  {
    // Record the residual at the final iterate as well.
    const Vector mean = moments(obs, gibbs_state(obs, beta).p());
    const double res = (v - mean).cwiseAbs().maxCoeff();
    if (res < best_res) {
      best_res = res;
      best_beta = beta;
    }
  }

  if (best_res > opts.tol) {
    // The dual is unbounded below exactly when v touches the hull boundary.
    throw OutOfRange("GGE fit did not converge; values on or outside hull");
  }
  if (rank_deficient) {
    // Project out the degenerate multiplier directions: minimum-norm choice.
    best_beta -= null_dirs * (null_dirs.transpose() * best_beta);
  }
  GibbsSolution sol{best_beta, gibbs_state(obs, best_beta), best_res,
                    iterations, rank_deficient};
  sol.residual = (moments(obs, sol.state.p()) - v).cwiseAbs().maxCoeff();
  return sol;
}

double free_energy(const DiagonalState& state, const ObservableSet& obs,
                   double beta) {
  if (obs.observables() != 1)
    throw DimensionMismatch("free_energy requires a single observable");
  if (beta == 0.0) throw ZeroBeta("free energy undefined at beta = 0");
  const double energy = expectation(state, obs)[0];
  return energy - shannon_entropy(state) / beta;
}

double free_entropy(const DiagonalState& state, const ObservableSet& obs,
                    VectorRef beta) {
  if (beta.size() != obs.observables())
    throw DimensionMismatch("one multiplier per observable required");
  return beta.dot(expectation(state, obs)) - shannon_entropy(state);
}

double gibbs_entropy_macro(const Macrostate& m) {
  const GibbsSolution fit = fit_canonical(m.observables(), m.energy());
  const double beta = fit.beta[0];
  return beta * m.energy() + log_partition(m.observables(), fit.beta);
}

}  // namespace ensemblelab
