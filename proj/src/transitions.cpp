#include "ensemblelab/transitions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "ensemblelab/maxent.hpp"
#include "ensemblelab/spectra.hpp"

namespace ensemblelab {

ReachabilityVerdict reachable_canonical(const Macrostate& m,
                                        const DiagonalState& target,
                                        double beta, double tol) {
  if (beta == 0.0) throw ZeroBeta("reachability requires beta != 0");
  const GibbsSolution fit = fit_canonical(m.observables(), m.energy());
  ReachabilityVerdict v;
  v.lhs = free_energy(fit.state, m.observables(), beta);
  v.rhs = free_energy(target, m.observables(), beta);
  v.margin = v.lhs - v.rhs;
  v.allowed = v.margin >= -tol;
  return v;
}

ReachabilityVerdict reachable_gge(const Macrostate& m,
                                  const DiagonalState& target, VectorRef beta,
                                  double tol) {
  if ((beta.array() == 0.0).any())
    throw ZeroBeta("reachability requires beta^j != 0 for all j");
  const GibbsSolution fit = fit_gge(m.observables(), m.values());
  ReachabilityVerdict v;
  v.lhs = free_entropy(fit.state, m.observables(), beta);
  v.rhs = free_entropy(target, m.observables(), beta);
  v.margin = v.lhs - v.rhs;
  v.allowed = v.margin >= -tol;
  return v;
}

WorkReport work_bound(const Macrostate& m, double beta) {
  if (beta == 0.0) throw ZeroBeta("work bound requires beta != 0");
  const auto& obs = m.observables();
  const GibbsSolution fit = fit_canonical(obs, m.energy());
  WorkReport w;
  w.initial_f = free_energy(fit.state, obs, beta);
  w.final_f = free_energy(gibbs_state(obs, beta), obs, beta);
  w.delta_f = w.initial_f - w.final_f;
  return w;
}

bool clausius_check(double e, double e_prime, const ObservableSet& obs,
                    double beta, double tol) {
  if (beta == 0.0) throw ZeroBeta("Clausius check requires beta != 0");
  const double f_initial =
      free_energy(fit_canonical(obs, e).state, obs, beta);
  const double f_final =
      free_energy(fit_canonical(obs, e_prime).state, obs, beta);
  return f_initial >= f_final - tol;
}

namespace {

double passive_energy(Vector probs, Vector energies) {
  std::sort(probs.data(), probs.data() + probs.size(),
            std::greater<double>());
  std::sort(energies.data(), energies.data() + energies.size());
  return probs.dot(energies);
}

}  // namespace

double ergotropy(const DiagonalState& state, const ObservableSet& obs) {
  if (obs.observables() != 1)
    throw DimensionMismatch("ergotropy requires a single observable");
  if (state.size() != obs.levels())
    throw DimensionMismatch("state dimension does not match level count");
  const Vector h = obs.spectrum();
  return state.p().dot(h) - passive_energy(state.p(), h);
}

double trivialization_witness(const ObservableSet& h1, double beta1,
                              const ObservableSet& h2, double beta2, int n1,
                              int n2, int size_limit) {
  if (h1.observables() != 1 || h2.observables() != 1)
    throw DimensionMismatch("witness requires single-observable baths");
  if (n1 < 1 || n2 < 1) throw InvalidState("copy numbers must be >= 1");

  double dim = 1.0;
  for (int i = 0; i < n1; ++i) dim *= h1.levels();
  for (int i = 0; i < n2; ++i) dim *= h2.levels();
  if (dim > static_cast<double>(size_limit))
    throw SizeLimit("composite dimension " + std::to_string(dim) +
                    " exceeds cap " + std::to_string(size_limit));

  Vector energies = Vector::Zero(1);
  Vector probs = Vector::Ones(1);
  const auto extend = [&](const ObservableSet& obs, double beta) {
    const Vector h = obs.spectrum();
    const Vector g = gibbs_state(obs, beta).p();
    Vector e2(energies.size() * h.size());
    Vector p2(e2.size());
    for (int i = 0; i < energies.size(); ++i) {
      for (int a = 0; a < h.size(); ++a) {
        e2[i * h.size() + a] = energies[i] + h[a];
        p2[i * h.size() + a] = probs[i] * g[a];
      }
    }
    energies = std::move(e2);
    probs = std::move(p2);
  };
  for (int i = 0; i < n1; ++i) extend(h1, beta1);
  for (int i = 0; i < n2; ++i) extend(h2, beta2);

  return probs.dot(energies) - passive_energy(probs, energies);
}

SwapResult rescaled_swap(const DiagonalState& system_state, const Macrostate& m,
                         double beta) {
  if (beta == 0.0) throw ZeroBeta("rescaled swap requires beta != 0");
  const auto& obs = m.observables();
  if (obs.observables() != 1)
    throw DimensionMismatch("rescaled swap requires a single observable");
  if (!is_compatible(system_state, m))
    throw IncompatibleState("system state not compatible with the macrostate");

  const GibbsSolution fit = fit_canonical(obs, m.energy());
  const Vector h = obs.spectrum();
  const Vector h_env = (fit.beta[0] / beta) * h;

  // gamma_beta(H_env) has the same probability vector as gamma_e(H).
  SwapResult r{fit.state, system_state, 0.0, h_env};
  const double before = system_state.p().dot(h) + fit.state.p().dot(h_env);
  const double after = r.new_system.p().dot(h) + r.new_env.p().dot(h_env);
  r.delta_mean_energy = after - before;
  return r;
}

}  // namespace ensemblelab
