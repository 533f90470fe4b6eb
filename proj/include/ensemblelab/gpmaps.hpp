#ifndef ENSEMBLELAB_GPMAPS_HPP
#define ENSEMBLELAB_GPMAPS_HPP

#include <string>
#include <vector>

#include "ensemblelab/types.hpp"

namespace ensemblelab {

// Orthonormal basis of N = {x : sum x = 0, h.x = 0}, the traceless diagonal
// subspace orthogonal to the spectrum; members of one equivalence class
// differ exactly by elements of N.
struct NSpaceBasis {
  Matrix basis;  // d x (d-2), one vector per column
  int count() const { return static_cast<int>(basis.cols()); }
};

NSpaceBasis nspace_basis(const ObservableSet& obs);

// The unique t = a 1 + b h with h.t = 0 and sum t = sum h; together with h
// and the N basis it completes the diagonal-sector basis.
Vector t_matrix(const ObservableSet& obs);

// (e - e_beta(H)) / sum h^2, the coefficient of (h - t) in the expansion of
// a state with energy e around the bath ensemble.
double alpha(double e, const ObservableSet& obs, double beta);

// Split p = gamma_beta(H) + alpha (h - t) + N(p) with N(p) in the N-space.
struct Decomposition {
  double alpha_coeff = 0.0;
  Vector n_component;
};

Decomposition decompose(const DiagonalState& state, const ObservableSet& obs,
                        double beta);

// Column-stochastic matrix acting on probability vectors, p -> M p.
struct StochasticMap {
  Matrix M;
  explicit StochasticMap(Matrix m, double tol = 1e-10);
};

struct LpDiagnostics {
  int iterations_max = 0;
  int iterations_min = 0;
  std::string status;
};

// F and K: extreme values of h.(M (h - t)) over Gibbs-preserving
// column-stochastic M that also preserve the N-space. F equals sum h^2.
struct GPConstants {
  double f_const = 0.0;
  double k_const = 0.0;
  LpDiagnostics lp_status;
};

GPConstants lp_constants(const ObservableSet& obs, double beta);

// One Gibbs-preserving-map LP: extremize h.(M input) over column-stochastic
// M with M gamma = gamma, optionally constrained to preserve the N-space.
struct GpMapExtremum {
  double value = 0.0;
  Matrix map;
  int iterations = 0;
};

GpMapExtremum solve_gp_extremum(const ObservableSet& obs, double beta,
                                VectorRef input, bool maximize,
                                bool preserve_nspace);

struct EnergyBounds {
  double min_e = 0.0;
  double max_e = 0.0;
};

// Reachable final energies of the whole class under macrostate GP-maps: the
// piecewise-linear case split with kink at e_beta(H).
EnergyBounds gp_energy_bounds(double e, const ObservableSet& obs, double beta);
EnergyBounds gp_energy_bounds(double e, const ObservableSet& obs, double beta,
                              const GPConstants& constants);

// Reachable final energies from one microstate under Gibbs-preserving maps
// (no N-space constraint).
EnergyBounds thermal_energy_bounds(const DiagonalState& state,
                                   const ObservableSet& obs, double beta);

struct BreakdownRow {
  double e = 0.0;
  double gp_min = 0.0, gp_max = 0.0;
  double th_min = 0.0, th_max = 0.0;
};

struct BreakdownScan {
  std::vector<BreakdownRow> rows;
  double e_beta = 0.0;
  bool strict_gap = false;
};

// Per grid energy: class bounds vs single-microstate bounds from
// gamma_e(H); strict_gap reports whether the thermal region strictly exceeds
// the macrostate region anywhere on the grid.
BreakdownScan breakdown_scan(const ObservableSet& obs, double beta,
                             const std::vector<double>& e_grid,
                             double gap_tol = 1e-7);

}  // namespace ensemblelab

#endif  // ENSEMBLELAB_GPMAPS_HPP
