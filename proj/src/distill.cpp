#include "ensemblelab/distill.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "ensemblelab/maxent.hpp"
#include "ensemblelab/spectra.hpp"

namespace ensemblelab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double x, double y) {
  if (x == kNegInf) return y;
  if (y == kNegInf) return x;
  const double hi = std::max(x, y), lo = std::min(x, y);
  return hi + std::log1p(std::exp(lo - hi));
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw SizeLimit("integer overflow while clearing denominators");
  return r;
}

}  // namespace

Rational best_rational(double x, std::int64_t max_denominator) {
  if (max_denominator < 1)
    throw InvalidState("max_denominator must be >= 1");
  if (!std::isfinite(x)) throw InvalidState("cannot approximate a non-finite value");
  const bool negative = x < 0.0;
  const double target = std::abs(x);
  double v = target;

  // Continued-fraction convergents p/q; on denominator overflow compare the
  // last convergent with the best semiconvergent.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    const double fa = std::floor(v);
    if (fa > 9.2e18) break;
    const std::int64_t a = static_cast<std::int64_t>(fa);
    if (q1 > 0 && a > (max_denominator - q0) / q1) {
      // Semiconvergent with the largest admissible coefficient.
      const std::int64_t k = (max_denominator - q0) / q1;
      if (k > 0) {
        const std::int64_t ps = k * p1 + p0, qs = k * q1 + q0;
        const double err_conv = std::abs(
            target - static_cast<double>(p1) / static_cast<double>(q1));
        const double err_semi = std::abs(
            target - static_cast<double>(ps) / static_cast<double>(qs));
        if (err_semi < err_conv) { p1 = ps; q1 = qs; }
      }
      break;
    }
    const std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double rem = v - fa;
    if (rem < 1e-18) break;
    v = 1.0 / rem;
  }
  if (q1 == 0) { p1 = p0; q1 = q0; }
  return Rational{negative ? -p1 : p1, q1};
}

ObservableSet IntegerSpectrum::toObservables() const {
  Matrix q(observables(), levels());
  for (int j = 0; j < observables(); ++j) {
    for (int a = 0; a < levels(); ++a) {
      q(j, a) = static_cast<double>(charges(j, a) * scales[j].num) /
                static_cast<double>(scales[j].den);
    }
  }
  return ObservableSet(std::move(q));
}

IntegerSpectrum integerize(const ObservableSet& obs,
                           std::int64_t max_denominator) {
  const int n = obs.observables(), d = obs.levels();
  IntegerSpectrum out;
  out.charges.resize(n, d);
  out.scales.resize(n);
  out.approx_error = Vector::Zero(n);

  for (int j = 0; j < n; ++j) {
    std::vector<Rational> approx(d);
    std::int64_t common_den = 1;
    for (int a = 0; a < d; ++a) {
      approx[a] = best_rational(obs.charges()(j, a), max_denominator);
      out.approx_error[j] = std::max(
          out.approx_error[j],
          std::abs(obs.charges()(j, a) - approx[a].value()));
      common_den = std::lcm(common_den, approx[a].den);
      if (common_den > std::int64_t(1) << 50)
        throw SizeLimit("common denominator too large");
    }
    std::int64_t g = 0;
    for (int a = 0; a < d; ++a) {
      out.charges(j, a) =
          checked_mul(approx[a].num, common_den / approx[a].den);
      g = std::gcd(g, std::abs(out.charges(j, a)));
    }
    if (g == 0) g = 1;  // all-zero row
    for (int a = 0; a < d; ++a) out.charges(j, a) /= g;
    const std::int64_t r = std::gcd(g, common_den);
    out.scales[j] = Rational{g / r, common_den / r};
  }
  return out;
}

namespace {

// Log-space accumulators for one accumulated-charge lattice point.
struct LatticeNode {
  double log_dim = kNegInf;   // ln(#strings)
  double log_prob = kNegInf;  // ln(total initial weight)
  std::vector<double> log_count;  // per level: ln(sum over strings of k_x)
};

using Lattice = std::map<std::vector<std::int64_t>, LatticeNode>;

}  // namespace

TypeClassTable eigenspace_table(const IntegerSpectrum& ispec,
                                const DiagonalState& initial, int copies,
                                std::int64_t lattice_budget) {
  const int n = ispec.observables(), d = ispec.levels();
  if (initial.size() != d)
    throw DimensionMismatch("initial state does not match level count");
  if (copies < 1) throw InvalidState("copies must be >= 1");

  std::vector<double> log_p(d, kNegInf);
  for (int a = 0; a < d; ++a)
    if (initial.p()[a] > 0.0) log_p[a] = std::log(initial.p()[a]);

  Lattice cur;
  {
    LatticeNode origin;
    origin.log_dim = 0.0;
    origin.log_prob = 0.0;
    origin.log_count.assign(d, kNegInf);
    cur.emplace(std::vector<std::int64_t>(n, 0), std::move(origin));
  }

  for (int m = 0; m < copies; ++m) {
    Lattice next;
    for (const auto& [charge, node] : cur) {
      for (int a = 0; a < d; ++a) {
        std::vector<std::int64_t> key = charge;
        for (int j = 0; j < n; ++j) key[j] += ispec.charges(j, a);
        auto [it, inserted] = next.try_emplace(key);
        LatticeNode& nx = it->second;
        if (inserted) nx.log_count.assign(d, kNegInf);
        nx.log_dim = log_add(nx.log_dim, node.log_dim);
        if (log_p[a] != kNegInf)
          nx.log_prob = log_add(nx.log_prob, node.log_prob + log_p[a]);
        for (int x = 0; x < d; ++x)
          nx.log_count[x] = log_add(nx.log_count[x], node.log_count[x]);
        nx.log_count[a] = log_add(nx.log_count[a], node.log_dim);
      }
    }
    if (static_cast<std::int64_t>(next.size()) > lattice_budget)
      throw ChargeRangeOverflow("charge lattice exceeds configured budget");
    cur = std::move(next);
  }

  TypeClassTable table;
  table.copies = copies;
  table.spaces.reserve(cur.size());
  for (const auto& [charge, node] : cur) {
    EigenspaceRecord rec;
    rec.total_charge = charge;
    rec.log_dimension = node.log_dim;
    rec.probability = node.log_prob == kNegInf ? 0.0 : std::exp(node.log_prob);
    rec.occupation = Vector::Zero(d);
    for (int x = 0; x < d; ++x) {
      if (node.log_count[x] != kNegInf) {
        rec.occupation[x] =
            std::exp(node.log_count[x] - node.log_dim) / copies;
      }
    }
    table.spaces.push_back(std::move(rec));
  }
  return table;
}

DistillResult distilled_state(const IntegerSpectrum& ispec,
                              const DiagonalState& initial, int copies,
                              std::int64_t lattice_budget) {
  const ObservableSet obs = ispec.toObservables();
  const TypeClassTable table =
      eigenspace_table(ispec, initial, copies, lattice_budget);

  Vector reduced = Vector::Zero(ispec.levels());
  double log_dim_max = kNegInf;
  for (const auto& rec : table.spaces) {
    reduced += rec.probability * rec.occupation;
    log_dim_max = std::max(log_dim_max, rec.log_dimension);
  }

  const GibbsSolution fit = fit_gge(obs, expectation(initial, obs));
  DistillResult r{DiagonalState(reduced, 1e-9), fit.state, 0.0, log_dim_max,
                  static_cast<std::int64_t>(table.spaces.size())};
  r.tv_to_target = 0.5 * (r.reduced.p() - r.target.p()).cwiseAbs().sum();
  return r;
}

StirlingBounds stirling_sandwich(const std::vector<std::int64_t>& type_counts) {
  std::int64_t total = 0;
  for (std::int64_t k : type_counts) {
    if (k < 0) throw InvalidState("type counts must be nonnegative");
    total += k;
  }
  if (total < 1) throw InvalidState("total count must be >= 1");
  const double nd = static_cast<double>(total);

  StirlingBounds b;
  b.exact_log = std::lgamma(nd + 1.0);
  double entropy = 0.0;
  double half_log_poly = 0.5 * std::log(2.0 * M_PI * nd);
  double corr_low = 1.0 / (12.0 * nd + 1.0);
  double corr_high = 1.0 / (12.0 * nd);
  for (std::int64_t k : type_counts) {
    if (k == 0) continue;
    const double kd = static_cast<double>(k);
    b.exact_log -= std::lgamma(kd + 1.0);
    entropy -= (kd / nd) * std::log(kd / nd);
    half_log_poly -= 0.5 * std::log(2.0 * M_PI * kd);
    corr_low -= 1.0 / (12.0 * kd);
    corr_high -= 1.0 / (12.0 * kd + 1.0);
  }
  b.lower = nd * entropy + half_log_poly + corr_low;
  b.upper = nd * entropy + half_log_poly + corr_high;
  return b;
}

RandomnessGadget randomness_gadget(double beta) {
  if (beta <= 0.0)
    throw NonpositiveBeta("the gadget requires a positive-temperature bath");
  RandomnessGadget g;
  g.delta = std::log(1.0 + std::sqrt(2.0)) / beta;
  g.weights = {0.5, 0.5};
  return g;
}

}  // namespace ensemblelab
