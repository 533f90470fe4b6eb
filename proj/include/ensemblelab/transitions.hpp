#ifndef ENSEMBLELAB_TRANSITIONS_HPP
#define ENSEMBLELAB_TRANSITIONS_HPP

#include "ensemblelab/types.hpp"

namespace ensemblelab {

// Decision of a reachability oracle: allowed iff lhs >= rhs - tol, where lhs
// is the monotone of the fitted ensemble and rhs that of the target. Ties
// count as allowed (the criterion is non-strict).
struct ReachabilityVerdict {
  bool allowed = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // lhs - rhs
};

struct WorkReport {
  double delta_f = 0.0;  // optimal extractable work
  double initial_f = 0.0;
  double final_f = 0.0;
};

// Free-energy criterion for single-observable macrostates: allowed iff
// F(gamma_e(H)) >= F(target) - tol at bath temperature 1/beta.
ReachabilityVerdict reachable_canonical(const Macrostate& m,
                                        const DiagonalState& target,
                                        double beta,
                                        double tol = ToleranceConfig{}.decision);

// Free-entropy criterion for several charges: allowed iff
// G(gamma_v(Q)) >= G(target) - tol. Requires beta^j != 0 for all j.
ReachabilityVerdict reachable_gge(const Macrostate& m,
                                  const DiagonalState& target, VectorRef beta,
                                  double tol = ToleranceConfig{}.decision);

// Optimal work from relaxing the fitted ensemble to the bath ensemble:
// delta_f = F(gamma_e(H)) - F(gamma_beta(H)) >= 0.
WorkReport work_bound(const Macrostate& m, double beta);

// True iff the macrostate transition e -> e_prime is allowed, decided by the
// free-energy criterion F(gamma_e) >= F(gamma_e') - tol.
bool clausius_check(double e, double e_prime, const ObservableSet& obs,
                    double beta, double tol = ToleranceConfig{}.decision);

// Mean energy above the passive rearrangement (populations sorted
// non-increasing against energies sorted non-decreasing). Zero iff passive.
double ergotropy(const DiagonalState& state, const ObservableSet& obs);

// Ergotropy of gamma_{beta1}(H1)^{n1} x gamma_{beta2}(H2)^{n2} under the
// summed spectrum; positive for some copy numbers whenever beta1 != beta2.
double trivialization_witness(const ObservableSet& h1, double beta1,
                              const ObservableSet& h2, double beta2, int n1,
                              int n2, int size_limit = 4096);

struct SwapResult {
  DiagonalState new_system;
  DiagonalState new_env;
  double delta_mean_energy = 0.0;
  Vector env_spectrum;  // (beta_S(e)/beta) H
};

// Swap with an environment whose spectrum is rescaled so its Gibbs state
// coincides with gamma_e(H); conserves the total mean energy exactly for
// every state compatible with m.
SwapResult rescaled_swap(const DiagonalState& system_state, const Macrostate& m,
                         double beta);

}  // namespace ensemblelab

#endif  // ENSEMBLELAB_TRANSITIONS_HPP
