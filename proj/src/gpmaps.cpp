#include "ensemblelab/gpmaps.hpp"

#include <cmath>

#include "ensemblelab/maxent.hpp"
#include "ensemblelab/simplex.hpp"
#include "ensemblelab/spectra.hpp"

namespace ensemblelab {

namespace {

Vector single_spectrum(const ObservableSet& obs, const char* who) {
  if (obs.observables() != 1)
    throw DimensionMismatch(std::string(who) + " requires a single observable");
  return obs.spectrum();
}

bool proportional_to_identity(const Vector& h) {
  return h.maxCoeff() - h.minCoeff() == 0.0;
}

}  // namespace

NSpaceBasis nspace_basis(const ObservableSet& obs) {
  const Vector h = single_spectrum(obs, "nspace_basis");
  const int d = obs.levels();
  if (proportional_to_identity(h))
    throw TrivialHamiltonian("spectrum proportional to the identity");
  if (d == 2)
    throw DimensionTooSmall("N-space is empty for d = 2");

  // Orthonormalize {1, h}, then keep the orthogonal complement of their span
  // inside the canonical basis via Gram-Schmidt.
  Matrix span(d, 2);
  span.col(0) = Vector::Ones(d) / std::sqrt(static_cast<double>(d));
  Vector h_perp = h - h.mean() * Vector::Ones(d);
  span.col(1) = h_perp / h_perp.norm();

  NSpaceBasis out;
  out.basis.resize(d, d - 2);
  int found = 0;
  for (int k = 0; k < d && found < d - 2; ++k) {
    Vector v = Vector::Unit(d, k);
    v -= span * (span.transpose() * v);
    for (int j = 0; j < found; ++j)
      v -= out.basis.col(j) * out.basis.col(j).dot(v);
    const double norm = v.norm();
    if (norm > 1e-10) {
      out.basis.col(found++) = v / norm;
    }
  }
  if (found != d - 2)
    throw SolverFailure("Gram-Schmidt found fewer than d-2 directions");
  return out;
}

Vector t_matrix(const ObservableSet& obs) {
  const Vector h = single_spectrum(obs, "t_matrix");
  const int d = obs.levels();
  const double sum_h = h.sum();
  const double sum_h2 = h.squaredNorm();
  // Solve a sum(h) + b sum(h^2) = 0 and a d + b sum(h) = sum(h); singular
  // exactly when h is proportional to the identity.
  const double det = sum_h * sum_h - d * sum_h2;
  if (det == 0.0)
    throw TrivialHamiltonian("spectrum proportional to the identity");
  const double a = -sum_h2 * sum_h / det;
  const double b = sum_h * sum_h / det;
  return a * Vector::Ones(d) + b * h;
}

double alpha(double e, const ObservableSet& obs, double beta) {
  const Vector h = single_spectrum(obs, "alpha");
  const double sum_h2 = h.squaredNorm();
  if (sum_h2 == 0.0) throw ZeroHamiltonian("alpha undefined for H = 0");
  return (e - thermal_energy(obs, beta)) / sum_h2;
}

Decomposition decompose(const DiagonalState& state, const ObservableSet& obs,
                        double beta) {
  const Vector h = single_spectrum(obs, "decompose");
  if (state.size() != obs.levels())
    throw DimensionMismatch("state dimension does not match level count");
  const double e = state.p().dot(h);
  Decomposition dec;
  dec.alpha_coeff = alpha(e, obs, beta);
  dec.n_component = state.p() - gibbs_state(obs, beta).p() -
                    dec.alpha_coeff * (h - t_matrix(obs));
  return dec;
}

StochasticMap::StochasticMap(Matrix m, double tol) : M(std::move(m)) {
  if (M.rows() != M.cols()) throw InvalidState("map must be square");
  if (M.minCoeff() < -1e-12)
    throw InvalidState("negative entry in stochastic map");
  for (int b = 0; b < M.cols(); ++b) {
    if (std::abs(M.col(b).sum() - 1.0) > tol)
      throw InvalidState("column " + std::to_string(b) + " does not sum to 1");
  }
}

GpMapExtremum solve_gp_extremum(const ObservableSet& obs, double beta,
                                VectorRef input, bool maximize,
                                bool preserve_nspace) {
  const Vector h = single_spectrum(obs, "solve_gp_extremum");
  const int d = obs.levels();
  if (input.size() != d)
    throw DimensionMismatch("input vector does not match level count");
  const Vector gamma = gibbs_state(obs, beta).p();

  const int nv = d * d;  // variables m_ab, column-major over (a, b)
  const auto idx = [d](int a, int b) { return a * d + b; };

  int rows = 2 * d;
  Matrix nbasis;
  if (preserve_nspace) {
    nbasis = nspace_basis(obs).basis;
    rows += static_cast<int>(nbasis.cols());
  }

  LinearProgram lp;
  lp.A = Matrix::Zero(rows, nv);
  lp.b = Vector::Zero(rows);
  lp.c = Vector::Zero(nv);
  int r = 0;
  for (int b = 0; b < d; ++b, ++r) {  // column sums
    for (int a = 0; a < d; ++a) lp.A(r, idx(a, b)) = 1.0;
    lp.b[r] = 1.0;
  }
  for (int a = 0; a < d; ++a, ++r) {  // Gibbs fixing, row a
    for (int b = 0; b < d; ++b) lp.A(r, idx(a, b)) = gamma[b];
    lp.b[r] = gamma[a];
  }
  if (preserve_nspace) {
    for (int k = 0; k < nbasis.cols(); ++k, ++r) {  // h.(M v_k) = 0
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) lp.A(r, idx(a, b)) = h[a] * nbasis(b, k);
      lp.b[r] = 0.0;
    }
  }
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) lp.c[idx(a, b)] = h[a] * input[b];
  if (maximize) lp.c = -lp.c;

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal)
    throw SolverFailure(std::string("GP-map LP: ") + to_string(sol.status));

  GpMapExtremum out;
  out.value = maximize ? -sol.objective : sol.objective;
  out.iterations = sol.iterations;
  out.map.resize(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) out.map(a, b) = sol.x[idx(a, b)];
  return out;
}

GPConstants lp_constants(const ObservableSet& obs, double beta) {
  const Vector h = single_spectrum(obs, "lp_constants");
  if (obs.levels() < 3)
    throw DimensionTooSmall("lp_constants requires d >= 3");
  if (proportional_to_identity(h))
    throw TrivialHamiltonian("spectrum proportional to the identity");
  if (beta == 0.0) throw ZeroBeta("lp_constants requires beta != 0");

  const Vector objective_input = h - t_matrix(obs);
  const GpMapExtremum hi =
      solve_gp_extremum(obs, beta, objective_input, true, true);
  const GpMapExtremum lo =
      solve_gp_extremum(obs, beta, objective_input, false, true);
  GPConstants c;
  c.f_const = hi.value;
  c.k_const = lo.value;
  c.lp_status.iterations_max = hi.iterations;
  c.lp_status.iterations_min = lo.iterations;
  c.lp_status.status = "optimal";
  return c;
}

EnergyBounds gp_energy_bounds(double e, const ObservableSet& obs, double beta,
                              const GPConstants& constants) {
  if (beta == 0.0) throw ZeroBeta("gp_energy_bounds requires beta != 0");
  const Macrostate m(obs, e);
  if (equivalence_class_dim(m) < 1)
    throw SingletonClass("equivalence class has a single member");
  const double e_beta = thermal_energy(obs, beta);
  const double a = alpha(e, obs, beta);
  const double inner = e_beta + a * constants.k_const;
  EnergyBounds b;
  if (e >= e_beta) {
    b.max_e = e;
    b.min_e = inner;
  } else {
    b.max_e = inner;
    b.min_e = e;
  }
  return b;
}

EnergyBounds gp_energy_bounds(double e, const ObservableSet& obs,
                              double beta) {
  if (beta == 0.0) throw ZeroBeta("gp_energy_bounds requires beta != 0");
  if (equivalence_class_dim(Macrostate(obs, e)) < 1)
    throw SingletonClass("equivalence class has a single member");
  return gp_energy_bounds(e, obs, beta, lp_constants(obs, beta));
}

EnergyBounds thermal_energy_bounds(const DiagonalState& state,
                                   const ObservableSet& obs, double beta) {
  if (beta == 0.0) throw ZeroBeta("thermal_energy_bounds requires beta != 0");
  EnergyBounds b;
  b.max_e = solve_gp_extremum(obs, beta, state.p(), true, false).value;
  b.min_e = solve_gp_extremum(obs, beta, state.p(), false, false).value;
  return b;
}

BreakdownScan breakdown_scan(const ObservableSet& obs, double beta,
                             const std::vector<double>& e_grid,
                             double gap_tol) {
  BreakdownScan scan;
  scan.e_beta = thermal_energy(obs, beta);
  const GPConstants constants = lp_constants(obs, beta);
  scan.rows.reserve(e_grid.size());
  for (double e : e_grid) {
    BreakdownRow row;
    row.e = e;
    const EnergyBounds gp = gp_energy_bounds(e, obs, beta, constants);
    const EnergyBounds th =
        thermal_energy_bounds(fit_canonical(obs, e).state, obs, beta);
    row.gp_min = gp.min_e;
    row.gp_max = gp.max_e;
    row.th_min = th.min_e;
    row.th_max = th.max_e;
    if (row.th_max - row.gp_max > gap_tol || row.gp_min - row.th_min > gap_tol)
      scan.strict_gap = true;
    scan.rows.push_back(row);
  }
  return scan;
}

}  // namespace ensemblelab
