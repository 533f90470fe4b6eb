// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. The CLI binary path is argv[1] (used by the determinism
// criterion).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ensemblelab/distill.hpp"
#include "ensemblelab/gpmaps.hpp"
#include "ensemblelab/macrolimit.hpp"
#include "ensemblelab/maxent.hpp"
#include "ensemblelab/spectra.hpp"
#include "ensemblelab/transitions.hpp"
#include "test_util.hpp"

using namespace ensemblelab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::ostringstream violations;
  std::string text() const {
    std::string s = detail.str();
    if (!pass) s += violations.str();
    return s;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

#define EXPECT(out, cond, text)                         \
  do {                                                  \
    if (!(cond)) {                                      \
      out.pass = false;                                 \
      out.violations << " | violated: " << text;        \
    }                                                   \
  } while (0)

ObservableSet qubit01() {
  return ObservableSet::hamiltonian((Vector(2) << 0, 1).finished());
}

ObservableSet qutrit012() {
  return ObservableSet::hamiltonian((Vector(3) << 0, 1, 2).finished());
}

// ---- criterion 1: fitting accuracy and round trips ----
Outcome criterion_fitting() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 eng(9001);
  double worst_res = 0.0, worst_round = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(eng() % 15);  // up to 16
    const ObservableSet obs =
        ObservableSet::hamiltonian(testutil::random_spectrum(eng, d));
    const double beta = 20.0 * testutil::uniform(eng) - 10.0;
    const GibbsSolution sol = fit_canonical(obs, thermal_energy(obs, beta));
    worst_res = std::max(worst_res, sol.residual);
    worst_round = std::max(worst_round, std::abs(sol.beta[0] - beta));
  }
  EXPECT(out, worst_res <= 1e-10, "canonical residual <= 1e-10");
  EXPECT(out, worst_round <= 1e-8, "beta round trip within 1e-8");

  double worst_gge = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(eng() % 11);  // up to 12
    const int n = 1 + static_cast<int>(eng() % 3);
    Matrix q(n, d);
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < d; ++a) q(j, a) = 4.0 * testutil::uniform(eng) - 2.0;
    const ObservableSet obs{std::move(q)};
    const Vector v = obs.charges() * testutil::random_simplex_point(eng, d);
    worst_gge = std::max(worst_gge, fit_gge(obs, v).residual);
  }
  EXPECT(out, worst_gge <= 1e-10, "GGE residual <= 1e-10");

  const double elapsed = seconds_since(t0);
  EXPECT(out, elapsed < 5.0, "runtime < 5 s");
  out.detail << "worst residuals: canonical " << worst_res << ", round trip "
             << worst_round << ", gge " << worst_gge << "; " << elapsed
             << " s";
  return out;
}

// ---- criterion 2: maximum-entropy dominance over sampled classes ----
Outcome criterion_dominance() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 eng(9002);
  for (int macro = 0; macro < 20; ++macro) {
    const int d = 3 + static_cast<int>(eng() % 6);
    const int n = 1 + static_cast<int>(eng() % 2);
    Matrix q(n, d);
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < d; ++a) q(j, a) = 3.0 * testutil::uniform(eng) - 1.5;
    const ObservableSet obs{std::move(q)};
    const Macrostate m(obs, obs.charges() * testutil::random_simplex_point(eng, d));
    const GibbsSolution fit = fit_gge(obs, m.values());
    const double s_max = shannon_entropy(fit.state);
    for (const auto& rho : sample_compatible(m, 1000, 9100 + macro)) {
      const double s = shannon_entropy(rho);
      if (s > s_max + 1e-12) {
        EXPECT(out, false, "S(rho) <= S(gamma) + 1e-12");
        break;
      }
      if (s >= s_max - 1e-12) {
        const double tv = 0.5 * (rho.p() - fit.state.p()).cwiseAbs().sum();
        EXPECT(out, tv <= 1e-8, "entropy ties only at the ensemble");
      }
    }
  }
  const double elapsed = seconds_since(t0);
  EXPECT(out, elapsed < 10.0, "runtime < 10 s");
  out.detail << "20 macrostates x 1000 samples; " << elapsed << " s";
  return out;
}

// ---- criterion 3: reachability oracle consistency ----
Outcome criterion_reachability() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const ObservableSet obs = qutrit012();
  const double beta = 1.0;

  const Macrostate m(obs, 0.8);
  EXPECT(out, reachable_canonical(m, fit_canonical(obs, 0.8).state, beta).allowed,
         "self-transition allowed");
  EXPECT(out, reachable_canonical(m, gibbs_state(obs, beta), beta).allowed,
         "bath ensemble reachable");
  const Macrostate thermal(obs, thermal_energy(obs, beta));
  const DiagonalState excited((Vector(3) << 0, 0, 1).finished());
  EXPECT(out, !reachable_canonical(thermal, excited, beta).allowed,
         "pure excited target disallowed");

  std::mt19937_64 eng(9003);
  int agree = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(eng() % 6);
    const ObservableSet spec =
        ObservableSet::hamiltonian(testutil::random_spectrum(eng, d));
    const double b = 0.2 + 2.8 * testutil::uniform(eng);
    const Macrostate macro(spec,
                           spec.charges() * testutil::random_simplex_point(eng, d));
    const DiagonalState target(testutil::random_simplex_point(eng, d));
    const bool canonical = reachable_canonical(macro, target, b).allowed;
    const bool gge =
        reachable_gge(macro, target, Vector::Constant(1, b)).allowed;
    if (canonical == gge) ++agree;
  }
  EXPECT(out, agree == 200, "GGE and canonical oracles decision-equal");
  const double elapsed = seconds_since(t0);
  EXPECT(out, elapsed < 5.0, "runtime < 5 s");
  out.detail << agree << "/200 decisions agree; " << elapsed << " s";
  return out;
}

// ---- criterion 4: exact conservation of the rescaled swap ----
Outcome criterion_swap() {
  Outcome out;
  double worst = 0.0;
  std::mt19937_64 eng(9004);
  for (const int d : {3, 5}) {
    const ObservableSet obs =
        ObservableSet::hamiltonian(testutil::random_spectrum(eng, d));
    const double beta = 0.9;
    const Vector interior = testutil::random_simplex_point(eng, d);
    const Macrostate m(obs, obs.charges() * interior);
    for (const auto& state : sample_compatible(m, 500, 9400 + d)) {
      worst = std::max(worst,
                       std::abs(rescaled_swap(state, m, beta).delta_mean_energy));
    }
  }
  EXPECT(out, worst <= 1e-12, "|delta mean energy| <= 1e-12");
  out.detail << "1000 sampled microstates, worst |delta| " << worst;
  return out;
}

// ---- criterion 5: analytic LP constant ----
Outcome criterion_lp_constant() {
  Outcome out;
  std::mt19937_64 eng(9005);
  double worst = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 3 + static_cast<int>(eng() % 3);
    const ObservableSet obs =
        ObservableSet::hamiltonian(testutil::random_spectrum(eng, d));
    const double beta = (testutil::uniform(eng) < 0.5 ? -1.0 : 1.0) *
                        (0.2 + 2.3 * testutil::uniform(eng));
    const GPConstants c = lp_constants(obs, beta);
    worst = std::max(worst,
                     std::abs(c.f_const - obs.spectrum().squaredNorm()));
  }
  EXPECT(out, worst <= 1e-8, "F equals sum h^2 within 1e-8");
  out.detail << "25 random (H, beta), worst |F - sum h^2| " << worst;
  return out;
}

// ---- criterion 6: breakdown of equivalence ----
Outcome criterion_breakdown() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> grid(41);
  for (int i = 0; i < 41; ++i) grid[i] = 2.0 * (i + 1) / 42.0;
  const BreakdownScan scan = breakdown_scan(qutrit012(), 1.0, grid);
  double best_gap = 0.0;
  bool sandwich = true;
  for (const auto& row : scan.rows) {
    best_gap = std::max(best_gap, std::max(row.th_max - row.gp_max,
                                           row.gp_min - row.th_min));
    if (row.gp_max > row.th_max + 1e-9 || row.th_min > row.gp_min + 1e-9)
      sandwich = false;
  }
  EXPECT(out, scan.strict_gap && best_gap > 1e-7, "strict gap > 1e-7 somewhere");
  EXPECT(out, sandwich, "macrostate bounds inside thermal bounds everywhere");
  const double elapsed = seconds_since(t0);
  EXPECT(out, elapsed < 30.0, "runtime < 30 s");
  out.detail << "41 grid points, largest gap " << best_gap << "; " << elapsed
             << " s";
  return out;
}

// Explicit-enumeration oracle for the distillation reduced state.
Vector enumerate_reduced(const IntegerSpectrum& ispec, const Vector& p,
                         int copies) {
  const int d = ispec.levels();
  struct Group {
    double dim = 0.0, prob = 0.0;
    std::vector<double> counts;
  };
  std::map<std::vector<std::int64_t>, Group> groups;
  std::vector<int> string(copies, 0);
  while (true) {
    std::vector<std::int64_t> charge(ispec.observables(), 0);
    double weight = 1.0;
    std::vector<double> counts(d, 0.0);
    for (int site = 0; site < copies; ++site) {
      for (int j = 0; j < ispec.observables(); ++j)
        charge[j] += ispec.charges(j, string[site]);
      weight *= p[string[site]];
      counts[string[site]] += 1.0;
    }
    Group& g = groups[charge];
    if (g.counts.empty()) g.counts.assign(d, 0.0);
    g.dim += 1.0;
    g.prob += weight;
    for (int x = 0; x < d; ++x) g.counts[x] += counts[x];
    int site = copies - 1;
    while (site >= 0 && ++string[site] == d) string[site--] = 0;
    if (site < 0) break;
  }
  Vector reduced = Vector::Zero(d);
  for (const auto& [charge, g] : groups)
    for (int x = 0; x < d; ++x)
      reduced[x] += g.prob * g.counts[x] / (copies * g.dim);
  return reduced;
}

// ---- criterion 7: distillation convergence profile ----
Outcome criterion_distillation() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const IntegerSpectrum ispec = integerize(qubit01(), 10);
  const DiagonalState initial((Vector(2) << 0.9, 0.1).finished());

  std::vector<double> tv;
  for (const int copies : {2, 4, 8, 16, 32, 64})
    tv.push_back(distilled_state(ispec, initial, copies).tv_to_target);
  bool strictly_decreasing = true;
  for (std::size_t i = 1; i < tv.size(); ++i)
    if (!(tv[i] < tv[i - 1])) strictly_decreasing = false;
  EXPECT(out, strictly_decreasing, "tv strictly decreasing over copies");
  EXPECT(out, tv.back() <= 0.02, "tv at 64 copies <= 0.02");

  const DiagonalState gamma = gibbs_state(qubit01(), 1.3);
  bool fixed_point = true;
  for (const int copies : {2, 4, 8, 16, 32, 64}) {
    if (distilled_state(ispec, gamma, copies).tv_to_target > 1e-12)
      fixed_point = false;
  }
  EXPECT(out, fixed_point, "Gibbs input is a fixed point to 1e-12");

  double worst = 0.0;
  for (int copies = 1; copies <= 8; ++copies) {
    const DistillResult r = distilled_state(ispec, initial, copies);
    worst = std::max(worst, (r.reduced.p() -
                             enumerate_reduced(ispec, initial.p(), copies))
                                .cwiseAbs()
                                .maxCoeff());
  }
  EXPECT(out, worst <= 1e-10, "DP equals brute force to 1e-10");

  const double elapsed = seconds_since(t0);
  EXPECT(out, elapsed < 60.0, "runtime < 60 s");
  out.detail << "tv profile:";
  for (const double v : tv) out.detail << " " << v;
  out.detail << "; brute-force gap " << worst << "; " << elapsed << " s";
  return out;
}

// ---- criterion 8: randomness gadget ----
Outcome criterion_gadget() {
  Outcome out;
  const double target = std::log(1.0 + std::sqrt(2.0));
  for (const double beta : {0.3, 1.0, 2.7}) {
    const RandomnessGadget g = randomness_gadget(beta);
    EXPECT(out, g.weights.first == 0.5 && g.weights.second == 0.5,
           "weights exactly (1/2, 1/2)");
    EXPECT(out, std::abs(beta * g.delta - target) <= 1e-12,
           "beta * delta = ln(1 + sqrt 2) within 1e-12");
  }
  out.detail << "beta * delta - ln(1+sqrt2) checked at three temperatures";
  return out;
}

// ---- criterion 9: two-bath ergotropy witness ----
Outcome criterion_witness() {
  Outcome out;
  const ObservableSet q = qubit01();
  double best = 0.0;
  for (int n = 1; n <= 5; ++n)
    best = std::max(best, trivialization_witness(q, 2.0, q, 0.5, n, n));
  EXPECT(out, best > 0.0, "positive witness for beta1 != beta2, some n <= 5");

  double worst_equal = 0.0;
  for (int n1 = 1; n1 <= 3; ++n1)
    for (int n2 = 1; n2 <= 3; ++n2)
      worst_equal = std::max(
          worst_equal, std::abs(trivialization_witness(q, 1.1, q, 1.1, n1, n2)));
  EXPECT(out, worst_equal <= 1e-12, "zero witness at equal temperatures");
  out.detail << "max witness " << best << ", equal-temperature residue "
             << worst_equal;
  return out;
}

// ---- criterion 10: macroscopic moment scaling ----
Outcome criterion_macrolimit() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const DiagonalState initial((Vector(2) << 0.9, 0.1).finished());
  const DiscreteDistribution x =
      subsystem_energy_change(initial, gibbs_state(qubit01(), 1.0), qubit01());
  const double sigma2 = x.variance();

  std::map<int, double> ratio;
  for (const int n : {16, 64, 256}) {
    const std::vector<DiscreteDistribution> copies(n, x);
    const MomentReport rep = moments_of_sum(copies, 4);
    ratio[n] = rep.lyapunov_ratio;
    EXPECT(out,
           std::abs(rep.central_moments_of_mean[0] - sigma2 / n) <=
               1e-15 * sigma2,
           "mu2(X/N) = sigma^2/N exactly");
    if (n == 256) {
      const double gaussianization =
          rep.central_moments_of_mean[2] /
          (3.0 * rep.central_moments_of_mean[0] * rep.central_moments_of_mean[0]);
      EXPECT(out, std::abs(gaussianization - 1.0) <= 0.02,
             "mu4/(3 mu2^2) within 2% of 1 at N = 256");
    }
  }
  EXPECT(out, std::abs(ratio[64] / ratio[16] - 0.5) <= 0.05 * 0.5,
         "lyapunov ratio quarters N -> halves value (16 -> 64)");
  EXPECT(out, std::abs(ratio[256] / ratio[64] - 0.5) <= 0.05 * 0.5,
         "lyapunov ratio quarters N -> halves value (64 -> 256)");
  const double elapsed = seconds_since(t0);
  EXPECT(out, elapsed < 5.0, "runtime < 5 s");
  out.detail << "ratios " << ratio[16] << " / " << ratio[64] << " / "
             << ratio[256] << "; " << elapsed << " s";
  return out;
}

// ---- criterion 11: CLI determinism ----
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion_cli_determinism(const std::string& cli) {
  Outcome out;
  if (cli.empty()) {
    out.pass = false;
    out.detail << "CLI path not supplied";
    return out;
  }
  if (std::system("mkdir -p acceptance_scratch") != 0) {
    out.pass = false;
    out.detail << "could not create scratch directory";
    return out;
  }
  std::ofstream("acceptance_scratch/qutrit.json")
      << "{\"d\":3,\"n\":1,\"eigenvalues\":[[0,1,2]]}";
  std::ofstream("acceptance_scratch/qubit.json")
      << "{\"d\":2,\"n\":1,\"eigenvalues\":[[0,1]]}";
  const std::vector<std::pair<std::string, std::string>> jobs = {
      {"breakdown",
       " breakdown --spectrum acceptance_scratch/qutrit.json --beta 1.0 "
       "--grid 41 --seed 3"},
      {"distill",
       " distill --spectrum acceptance_scratch/qubit.json --p 0.9,0.1 "
       "--copies 2,4,8,16,32,64 --seed 3"},
      {"clt",
       " clt --spectrum acceptance_scratch/qubit.json --p 0.9,0.1 --beta 1.0 "
       "--copies 16,64,256 --seed 3"}};
  for (const auto& [tag, args] : jobs) {
    const std::string f1 = "acceptance_scratch/" + tag + "_1";
    const std::string f2 = "acceptance_scratch/" + tag + "_2";
    const int rc1 = std::system((cli + args + " > " + f1 + " 2>/dev/null").c_str());
    const int rc2 = std::system((cli + args + " > " + f2 + " 2>/dev/null").c_str());
    EXPECT(out, rc1 == 0 && rc2 == 0, tag + " exits 0");
    const std::string a = slurp(f1), b = slurp(f2);
    EXPECT(out, !a.empty() && a == b, tag + " byte-identical");
  }
  out.detail << "breakdown, distill, clt each run twice";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Entry {
    int id;
    const char* name;
    Outcome outcome;
  };
  std::vector<Entry> entries;
  entries.push_back({1, "max-entropy fitting accuracy", criterion_fitting()});
  entries.push_back({2, "maximum-entropy dominance", criterion_dominance()});
  entries.push_back({3, "reachability oracle consistency", criterion_reachability()});
  entries.push_back({4, "rescaled-swap exact conservation", criterion_swap()});
  entries.push_back({5, "GP-map analytic constant", criterion_lp_constant()});
  entries.push_back({6, "breakdown of equivalence", criterion_breakdown()});
  entries.push_back({7, "ensemble distillation profile", criterion_distillation()});
  entries.push_back({8, "randomness gadget", criterion_gadget()});
  entries.push_back({9, "two-bath ergotropy witness", criterion_witness()});
  entries.push_back({10, "macroscopic moment scaling", criterion_macrolimit()});
  entries.push_back({11, "CLI determinism", criterion_cli_determinism(cli)});

  int failures = 0;
  for (const auto& e : entries) {
    if (!e.outcome.pass) ++failures;
    std::printf("[%s] criterion %2d: %s (%s)\n",
                e.outcome.pass ? "PASS" : "FAIL", e.id, e.name,
                e.outcome.text().c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(entries.size()) - failures,
              entries.size());
  return failures;
}
