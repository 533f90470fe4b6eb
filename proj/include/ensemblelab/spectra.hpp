#ifndef ENSEMBLELAB_SPECTRA_HPP
#define ENSEMBLELAB_SPECTRA_HPP

#include <cstdint>
#include <vector>

#include "ensemblelab/types.hpp"

namespace ensemblelab {

// Mean value of every observable: component j is sum_a p_a q^j_a.
Vector expectation(const DiagonalState& state, const ObservableSet& obs);

// True iff |<Q^j> - v^j| <= tol for all j.
bool is_compatible(const DiagonalState& state, const Macrostate& m,
                   double tol = ToleranceConfig{}.compatibility);

struct SampleOptions {
  int max_retries_per_sample = 200;
  double compatibility = ToleranceConfig{}.compatibility;
};

// Draws `count` states from the equivalence class of m, deterministically in
// `seed`. Dirichlet points are projected onto the moment constraints;
// off-simplex projections are pulled back toward the maximum-entropy member.
// A singleton class yields a single element (the unique member).
std::vector<DiagonalState> sample_compatible(const Macrostate& m, int count,
                                             std::uint64_t seed,
                                             const SampleOptions& opts = {});

// Block average over the joint eigenspaces of all Q^j, then the diagonal.
// Within a degenerate joint block every level receives the block mean, so
// each Tr(rho Q^j) is preserved exactly.
DiagonalState dephase(const HermitianState& rho, const ObservableSet& obs);

// -sum p ln p in nats, with 0 ln 0 := 0.
double shannon_entropy(const DiagonalState& state);

// Affine dimension of {p in simplex : Q p = v}; d - 2 for a single
// nondegenerate observable at interior energy, 0 for singleton classes.
int equivalence_class_dim(const Macrostate& m);

}  // namespace ensemblelab

#endif  // ENSEMBLELAB_SPECTRA_HPP
