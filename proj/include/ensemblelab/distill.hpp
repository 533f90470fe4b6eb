#ifndef ENSEMBLELAB_DISTILL_HPP
#define ENSEMBLELAB_DISTILL_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "ensemblelab/types.hpp"

namespace ensemblelab {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Best rational approximation with denominator <= max_denominator
// (continued-fraction convergents and semiconvergents).
Rational best_rational(double x, std::int64_t max_denominator);

// Integer charge table: original q^j_a = scale_j * charges(j, a), with each
// row reduced so its entries have gcd 1. Level order matches the
// ObservableSet it was built from.
struct IntegerSpectrum {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> charges;  // n x d
  std::vector<Rational> scales;  // one positive rational per observable
  Vector approx_error;           // per-observable max |q - scale * k|

  int levels() const { return static_cast<int>(charges.cols()); }
  int observables() const { return static_cast<int>(charges.rows()); }
  ObservableSet toObservables() const;
};

IntegerSpectrum integerize(const ObservableSet& obs,
                           std::int64_t max_denominator);

// One joint total-charge eigenspace of N copies.
struct EigenspaceRecord {
  std::vector<std::int64_t> total_charge;  // integer charge vector
  double log_dimension = 0.0;              // ln sum_T #T
  double probability = 0.0;                // weight of the subspace, p_xi
  Vector occupation;  // single-copy marginal of the maximally mixed subspace
};

struct TypeClassTable {
  int copies = 0;
  std::vector<EigenspaceRecord> spaces;  // ordered by total charge
};

// Exact bookkeeping over (copies, accumulated integer charge), log-space
// accumulators throughout. Throws ChargeRangeOverflow past lattice_budget
// lattice points.
TypeClassTable eigenspace_table(const IntegerSpectrum& ispec,
                                const DiagonalState& initial, int copies,
                                std::int64_t lattice_budget = 10000000);

struct DistillResult {
  DiagonalState reduced;
  DiagonalState target;
  double tv_to_target = 0.0;
  double log_dim_max = 0.0;
  std::int64_t n_eigenspaces = 0;
};

// Per-copy reduced state after randomizing every total-charge eigenspace,
// against the maximum-entropy state fitted to expectation(initial).
DistillResult distilled_state(const IntegerSpectrum& ispec,
                              const DiagonalState& initial, int copies,
                              std::int64_t lattice_budget = 10000000);

// Natural logs of the multinomial count: Robbins-style lower/upper bounds
// with the explicit polynomial factors, and the exact log-gamma value.
struct StirlingBounds {
  double lower = 0.0;
  double upper = 0.0;
  double exact_log = 0.0;
};

StirlingBounds stirling_sandwich(const std::vector<std::int64_t>& type_counts);

// Two-level bath gadget: gap delta with ground population 1/sqrt(2), giving
// an exactly unbiased two-outcome mixture.
struct RandomnessGadget {
  double delta = 0.0;
  std::pair<double, double> weights;
};

RandomnessGadget randomness_gadget(double beta);

}  // namespace ensemblelab

#endif  // ENSEMBLELAB_DISTILL_HPP
