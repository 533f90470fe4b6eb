#ifndef ENSEMBLELAB_MACROLIMIT_HPP
#define ENSEMBLELAB_MACROLIMIT_HPP

#include <vector>

#include "ensemblelab/types.hpp"

namespace ensemblelab {

// Finite distribution of an energy-change variable.
struct DiscreteDistribution {
  Vector support;
  Vector probs;
  DiscreteDistribution(Vector support_in, Vector probs_in,
                       double norm_tol = 1e-12);

  double mean() const;
  double variance() const;
  // E[(X - mean)^order], exact.
  double central_moment(int order) const;
  // E[|X - mean|^power] for real power.
  double abs_central_moment(double power) const;
  // kappa_2..kappa_max as a vector (index 0 <-> order 2).
  Vector cumulants(int max_order) const;
};

// Distribution of E_final - E_initial under independent level draws,
// collisions merged.
DiscreteDistribution subsystem_energy_change(const DiagonalState& initial,
                                             const DiagonalState& final_state,
                                             const ObservableSet& obs);

// Central moments of the mean X/N of independent (not necessarily identical)
// summands, computed exactly through cumulant additivity, next to the
// Gaussian reference sigma^2n (2n-1)!! at sigma^2 = s_N^2 / N^2.
struct MomentReport {
  int n_subsystems = 0;
  Vector central_moments_of_mean;  // orders 2..max_order
  Vector gaussian_reference;       // same indexing, odd orders exactly 0
  double lyapunov_ratio = 0.0;     // delta = 1; zero when every X_i is a point mass
};

MomentReport moments_of_sum(const std::vector<DiscreteDistribution>& dists,
                            int max_order);

// (1/s_N^{2+delta}) sum_i E|X_i - mu_i|^{2+delta}; decays like N^{-delta/2}
// for i.i.d. summands.
double lyapunov_check(const std::vector<DiscreteDistribution>& dists,
                      double delta);

struct HigherMomentRow {
  int n = 0;
  double moment = 0.0;    // mu_order(X/N) for N i.i.d. copies
  double gaussian = 0.0;  // normal prediction at the same variance
};

std::vector<HigherMomentRow> higher_moments_vanish(
    const DiscreteDistribution& dist, const std::vector<int>& n_grid,
    int order);

}  // namespace ensemblelab

#endif  // ENSEMBLELAB_MACROLIMIT_HPP
