#include "ensemblelab/macrolimit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ensemblelab {

namespace {

constexpr int kMaxOrder = 8;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double double_factorial_odd(int m) {  // (m-1)!! for even m
  double r = 1.0;
  for (int i = m - 1; i > 1; i -= 2) r *= i;
  return r;
}

// mu_n = sum_{j=2..n} C(n-1, j-1) kappa_j mu_{n-j}, built up from mu_0 = 1,
// mu_1 = 0. `kappa` is indexed so kappa[j-2] is the j-th cumulant.
Vector central_from_cumulants(const Vector& kappa, int max_order) {
  Vector mu = Vector::Zero(max_order + 1);
  mu[0] = 1.0;
  for (int n = 2; n <= max_order; ++n) {
    double acc = 0.0;
    for (int j = 2; j <= n; ++j)
      acc += binomial(n - 1, j - 1) * kappa[j - 2] * mu[n - j];
    mu[n] = acc;
  }
  return mu;
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(Vector support_in, Vector probs_in,
                                           double norm_tol)
    : support(std::move(support_in)), probs(std::move(probs_in)) {
  if (support.size() != probs.size() || support.size() < 1)
    throw DimensionMismatch("support and probability lengths differ");
  if (!support.allFinite() || !probs.allFinite())
    throw InvalidState("distribution entries must be finite");
  if (probs.minCoeff() < -norm_tol)
    throw InvalidState("negative probability in distribution");
  probs = probs.cwiseMax(0.0);
  if (std::abs(probs.sum() - 1.0) > norm_tol)
    throw InvalidState("distribution probabilities sum to " +
                       std::to_string(probs.sum()));
}

double DiscreteDistribution::mean() const { return probs.dot(support); }

double DiscreteDistribution::central_moment(int order) const {
  const double mu = mean();
  double acc = 0.0;
  for (int i = 0; i < support.size(); ++i)
    acc += probs[i] * std::pow(support[i] - mu, order);
  return acc;
}

double DiscreteDistribution::variance() const { return central_moment(2); }

double DiscreteDistribution::abs_central_moment(double power) const {
  const double mu = mean();
  double acc = 0.0;
  for (int i = 0; i < support.size(); ++i)
    acc += probs[i] * std::pow(std::abs(support[i] - mu), power);
  return acc;
}

Vector DiscreteDistribution::cumulants(int max_order) const {
  if (max_order > kMaxOrder)
    throw OrderTooHigh("cumulants supported up to order 8");
  if (max_order < 2) throw InvalidState("max_order must be >= 2");
  // kappa_n = mu_n - sum_{j=2..n-1} C(n-1, j-1) kappa_j mu_{n-j}.
  Vector mu = Vector::Zero(max_order + 1);
  mu[0] = 1.0;
  for (int n = 2; n <= max_order; ++n) mu[n] = central_moment(n);
  Vector kappa = Vector::Zero(max_order - 1);
  for (int n = 2; n <= max_order; ++n) {
    double acc = mu[n];
    for (int j = 2; j <= n - 1; ++j)
      acc -= binomial(n - 1, j - 1) * kappa[j - 2] * mu[n - j];
    kappa[n - 2] = acc;
  }
  return kappa;
}

DiscreteDistribution subsystem_energy_change(const DiagonalState& initial,
                                             const DiagonalState& final_state,
                                             const ObservableSet& obs) {
  if (obs.observables() != 1)
    throw DimensionMismatch("energy change requires a single observable");
  if (initial.size() != obs.levels() || final_state.size() != obs.levels())
    throw DimensionMismatch("state dimension does not match level count");
  const Vector h = obs.spectrum();
  const int d = obs.levels();

  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(static_cast<std::size_t>(d) * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const double w = initial.p()[a] * final_state.p()[b];
      if (w > 0.0) atoms.emplace_back(h[b] - h[a], w);
    }
  }
  std::sort(atoms.begin(), atoms.end());
  std::vector<double> values, weights;
  for (const auto& [x, w] : atoms) {
    if (!values.empty() && values.back() == x) {
      weights.back() += w;
    } else {
      values.push_back(x);
      weights.push_back(w);
    }
  }
  Vector support = Eigen::Map<Vector>(values.data(), values.size());
  Vector probs = Eigen::Map<Vector>(weights.data(), weights.size());
  return DiscreteDistribution(std::move(support), std::move(probs));
}

MomentReport moments_of_sum(const std::vector<DiscreteDistribution>& dists,
                            int max_order) {
  if (max_order > kMaxOrder) throw OrderTooHigh("max_order must be <= 8");
  if (max_order < 2) throw InvalidState("max_order must be >= 2");
  if (dists.empty()) throw InvalidState("at least one distribution required");

  const int n_sub = static_cast<int>(dists.size());
  Vector kappa_sum = Vector::Zero(max_order - 1);
  for (const auto& d : dists) kappa_sum += d.cumulants(max_order);

  const Vector mu = central_from_cumulants(kappa_sum, max_order);
  MomentReport report;
  report.n_subsystems = n_sub;
  report.central_moments_of_mean.resize(max_order - 1);
  report.gaussian_reference.resize(max_order - 1);
  const double var_of_mean = kappa_sum[0] / (static_cast<double>(n_sub) * n_sub);
  for (int m = 2; m <= max_order; ++m) {
    report.central_moments_of_mean[m - 2] =
        mu[m] / std::pow(static_cast<double>(n_sub), m);
    report.gaussian_reference[m - 2] =
        m % 2 == 0 ? std::pow(var_of_mean, m / 2) * double_factorial_odd(m)
                   : 0.0;
  }
  report.lyapunov_ratio =
      kappa_sum[0] > 0.0 ? lyapunov_check(dists, 1.0) : 0.0;
  return report;
}

double lyapunov_check(const std::vector<DiscreteDistribution>& dists,
                      double delta) {
  if (delta <= 0.0) throw InvalidState("delta must be > 0");
  if (dists.empty()) throw InvalidState("at least one distribution required");
  double s2 = 0.0, num = 0.0;
  for (const auto& d : dists) {
    s2 += d.variance();
    num += d.abs_central_moment(2.0 + delta);
  }
  if (s2 <= 0.0) throw ZeroVariance("total variance s_N^2 is zero");
  return num / std::pow(s2, 1.0 + delta / 2.0);
}

std::vector<HigherMomentRow> higher_moments_vanish(
    const DiscreteDistribution& dist, const std::vector<int>& n_grid,
    int order) {
  if (order % 2 != 0 || order < 2)
    throw InvalidState("order must be even and >= 2");
  if (order > kMaxOrder) throw OrderTooHigh("order must be <= 8");
  const Vector kappa = dist.cumulants(order);

  std::vector<HigherMomentRow> rows;
  rows.reserve(n_grid.size());
  for (int n : n_grid) {
    if (n < 1) throw InvalidState("grid entries must be >= 1");
    const Vector mu = central_from_cumulants(kappa * n, order);
    HigherMomentRow row;
    row.n = n;
    row.moment = mu[order] / std::pow(static_cast<double>(n), order);
    const double var_of_mean = kappa[0] / n;
    row.gaussian =
        std::pow(var_of_mean, order / 2) * double_factorial_odd(order);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ensemblelab
