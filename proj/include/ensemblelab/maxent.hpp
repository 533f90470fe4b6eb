#ifndef ENSEMBLELAB_MAXENT_HPP
#define ENSEMBLELAB_MAXENT_HPP

#include "ensemblelab/types.hpp"

namespace ensemblelab {

// Fitted maximum-entropy ensemble: multipliers beta^j, the ensemble state,
// the worst moment mismatch and the iteration count. rank_deficient is set
// when some observable is an affine combination of the others and the
// identity; the returned multipliers are then the minimum-norm choice.
struct GibbsSolution {
  Vector beta;
  DiagonalState state;
  double residual = 0.0;
  int iterations = 0;
  bool rank_deficient = false;
};

struct FitOptions {
  double tol = ToleranceConfig{}.fit;
  int max_iterations = 200;
  // |beta^j| is capped at multiplier_budget / range(Q^j) to keep every
  // exponent representable; hitting the cap reports OutOfRange.
  double multiplier_budget = 700.0;
};

// ln Tr exp(-sum_j beta^j Q^j), evaluated with the max-exponent shift.
double log_partition(const ObservableSet& obs, VectorRef beta);

// p_a proportional to exp(-sum_j beta^j q^j_a).
DiagonalState gibbs_state(const ObservableSet& obs, VectorRef beta);
DiagonalState gibbs_state(const ObservableSet& obs, double beta);

// Moments of the Gibbs state: <Q^j> at the given multipliers.
Vector thermal_energy(const ObservableSet& obs, VectorRef beta);
double thermal_energy(const ObservableSet& obs, double beta);

// Single-observable fit: bracketed bisection plus Newton polish on the
// strictly decreasing map beta -> <H>.
GibbsSolution fit_canonical(const ObservableSet& obs, double e,
                            const FitOptions& opts = {});

// Multi-observable fit: damped Newton on the convex dual
// ln Z(beta) + beta.v, whose Hessian is the observable covariance.
GibbsSolution fit_gge(const ObservableSet& obs, VectorRef v,
                      const FitOptions& opts = {});

// Tr(rho H) - S(rho)/beta.
double free_energy(const DiagonalState& state, const ObservableSet& obs,
                   double beta);

// sum_j beta^j Tr(rho Q^j) - S(rho).
double free_entropy(const DiagonalState& state, const ObservableSet& obs,
                    VectorRef beta);

// beta_S(e) (e - F(e,H)), computed as beta_S(e) e + ln Z(beta_S(e)); equals
// the Shannon entropy of the fitted ensemble, including at beta_S(e) = 0.
double gibbs_entropy_macro(const Macrostate& m);

}  // namespace ensemblelab

#endif  // ENSEMBLELAB_MAXENT_HPP
