#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ensemblelab/distill.hpp"
#include "ensemblelab/gpmaps.hpp"
#include "ensemblelab/json_io.hpp"
#include "ensemblelab/macrolimit.hpp"
#include "ensemblelab/maxent.hpp"
#include "ensemblelab/spectra.hpp"
#include "ensemblelab/transitions.hpp"

namespace el = ensemblelab;

namespace {

struct RunConfig {
  std::string spectrum_path;
  std::string spectrum2_path;
  std::optional<double> energy;
  std::vector<double> values;
  std::vector<double> p;
  std::vector<double> beta_list;
  double beta = 0.0;
  double beta2 = 0.0;
  std::vector<long long> copies;
  int grid = 41;
  long long seed = 0;
  long long mem_budget = 10000000;
  long long max_denominator = 1000000;
  double fit_tol = 1e-10;
  double decision_tol = 1e-9;
  std::string out_path;
  std::string format = "csv";
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

el::SpectrumFile load_spectrum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw el::InvalidState("cannot open spectrum file " + path);
  nlohmann::json j;
  in >> j;
  return el::spectrum_from_json(j);
}

el::DiagonalState state_from_flag(const el::ObservableSet& obs,
                                  const std::vector<double>& p) {
  if (static_cast<int>(p.size()) != obs.levels())
    throw el::DimensionMismatch("--p length does not match level count");
  el::Vector v = Eigen::Map<const el::Vector>(p.data(), p.size());
  return el::DiagonalState(obs.fromOriginalOrder(v));
}

el::Macrostate macrostate_from_config(const el::SpectrumFile& file,
                                      const RunConfig& cfg) {
  if (cfg.energy && file.obs.observables() == 1)
    return el::Macrostate(file.obs, *cfg.energy);
  if (!cfg.values.empty()) {
    el::Vector v =
        Eigen::Map<const el::Vector>(cfg.values.data(), cfg.values.size());
    return el::Macrostate(file.obs, v);
  }
  if (cfg.energy) return el::Macrostate(file.obs, *cfg.energy);
  if (file.values) return el::Macrostate(file.obs, *file.values);
  throw el::InvalidState("no mean values given (--energy, --values, or file)");
}

el::Vector beta_vector(const el::ObservableSet& obs, const RunConfig& cfg) {
  if (!cfg.beta_list.empty()) {
    if (static_cast<int>(cfg.beta_list.size()) != obs.observables())
      throw el::DimensionMismatch("--beta length does not match observables");
    return Eigen::Map<const el::Vector>(cfg.beta_list.data(),
                                        cfg.beta_list.size());
  }
  return el::Vector::Constant(obs.observables(), cfg.beta);
}

void write_output(const RunConfig& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out_path);
  if (!out) throw el::InvalidState("cannot open output file " + cfg.out_path);
  out << text;
}

nlohmann::json solution_json_original_order(const el::GibbsSolution& sol,
                                            const el::ObservableSet& obs) {
  nlohmann::json j = el::solution_to_json(sol);
  nlohmann::json p = nlohmann::json::array();
  const el::Vector original = obs.toOriginalOrder(sol.state.p());
  for (int i = 0; i < original.size(); ++i) p.push_back(original[i]);
  j["p"] = p;
  return j;
}

int run_fit(const RunConfig& cfg) {
  const auto file = load_spectrum(cfg.spectrum_path);
  const el::Macrostate m = macrostate_from_config(file, cfg);
  el::FitOptions opts;
  opts.tol = cfg.fit_tol;
  const el::GibbsSolution sol =
      file.obs.observables() == 1
          ? el::fit_canonical(file.obs, m.energy(), opts)
          : el::fit_gge(file.obs, m.values(), opts);
  write_output(cfg,
               solution_json_original_order(sol, file.obs).dump(2) + "\n");
  return 0;
}

int run_reach(const RunConfig& cfg) {
  const auto file = load_spectrum(cfg.spectrum_path);
  const el::Macrostate m = macrostate_from_config(file, cfg);
  const el::DiagonalState target = state_from_flag(file.obs, cfg.p);
  const el::Vector beta = beta_vector(file.obs, cfg);
  const el::ReachabilityVerdict v =
      file.obs.observables() == 1
          ? el::reachable_canonical(m, target, beta[0], cfg.decision_tol)
          : el::reachable_gge(m, target, beta, cfg.decision_tol);
  nlohmann::json j;
  j["allowed"] = v.allowed;
  j["lhs"] = v.lhs;
  j["rhs"] = v.rhs;
  j["margin"] = v.margin;
  write_output(cfg, j.dump(2) + "\n");
  return 0;
}

int run_work(const RunConfig& cfg) {
  const auto file = load_spectrum(cfg.spectrum_path);
  const el::Macrostate m = macrostate_from_config(file, cfg);
  const el::WorkReport w = el::work_bound(m, cfg.beta);
  nlohmann::json j;
  j["delta_f"] = w.delta_f;
  j["initial_f"] = w.initial_f;
  j["final_f"] = w.final_f;
  write_output(cfg, j.dump(2) + "\n");
  return 0;
}

int run_ergotropy(const RunConfig& cfg) {
  const auto file = load_spectrum(cfg.spectrum_path);
  const el::DiagonalState state = state_from_flag(file.obs, cfg.p);
  nlohmann::json j;
  j["ergotropy"] = el::ergotropy(state, file.obs);
  write_output(cfg, j.dump(2) + "\n");
  return 0;
}

int run_swap(const RunConfig& cfg) {
  const auto file = load_spectrum(cfg.spectrum_path);
  const el::Macrostate m = macrostate_from_config(file, cfg);
  const el::DiagonalState state = state_from_flag(file.obs, cfg.p);
  const el::SwapResult r = el::rescaled_swap(state, m, cfg.beta);
  nlohmann::json j;
  j["new_system"] = el::state_to_json(
      el::DiagonalState(file.obs.toOriginalOrder(r.new_system.p())));
  j["new_env"] = el::state_to_json(
      el::DiagonalState(file.obs.toOriginalOrder(r.new_env.p())));
  j["delta_mean_energy"] = r.delta_mean_energy;
  nlohmann::json env = nlohmann::json::array();
  const el::Vector env_orig = file.obs.toOriginalOrder(r.env_spectrum);
  for (int i = 0; i < env_orig.size(); ++i) env.push_back(env_orig[i]);
  j["env_spectrum"] = env;
  write_output(cfg, j.dump(2) + "\n");
  return 0;
}

int run_trivialize(const RunConfig& cfg) {
  const auto f1 = load_spectrum(cfg.spectrum_path);
  const auto f2 = load_spectrum(cfg.spectrum2_path.empty() ? cfg.spectrum_path
                                                           : cfg.spectrum2_path);
  std::vector<long long> ns = cfg.copies;
  if (ns.empty()) ns = {1, 2, 3, 4, 5};
  std::ostringstream csv;
  csv << "n,witness\n";
  nlohmann::json rows = nlohmann::json::array();
  for (long long n : ns) {
    const double w = el::trivialization_witness(
        f1.obs, cfg.beta, f2.obs, cfg.beta2, static_cast<int>(n),
        static_cast<int>(n));
    csv << n << "," << fmt(w) << "\n";
    rows.push_back({{"n", n}, {"witness", w}});
  }
  if (cfg.format == "json")
    write_output(cfg, rows.dump(2) + "\n");
  else
    write_output(cfg, csv.str());
  return 0;
}

int run_gpmap(const RunConfig& cfg) {
  const auto file = load_spectrum(cfg.spectrum_path);
  const el::GPConstants c = el::lp_constants(file.obs, cfg.beta);
  nlohmann::json j;
  j["f_const"] = c.f_const;
  j["k_const"] = c.k_const;
  j["e_beta"] = el::thermal_energy(file.obs, cfg.beta);
  j["lp_iterations_max"] = c.lp_status.iterations_max;
  j["lp_iterations_min"] = c.lp_status.iterations_min;
  j["lp_status"] = c.lp_status.status;
  if (cfg.energy) {
    const el::EnergyBounds b =
        el::gp_energy_bounds(*cfg.energy, file.obs, cfg.beta, c);
    j["min_e"] = b.min_e;
    j["max_e"] = b.max_e;
  }
  write_output(cfg, j.dump(2) + "\n");
  return 0;
}

int run_breakdown(const RunConfig& cfg) {
  const auto file = load_spectrum(cfg.spectrum_path);
  if (cfg.grid < 1) throw el::InvalidState("--grid must be >= 1");
  const double lo = file.obs.minCharge(0), hi = file.obs.maxCharge(0);
  std::vector<double> grid(cfg.grid);
  for (int i = 0; i < cfg.grid; ++i)
    grid[i] = lo + (hi - lo) * (i + 1) / (cfg.grid + 1);
  const el::BreakdownScan scan = el::breakdown_scan(file.obs, cfg.beta, grid);
  std::ostringstream csv;
  csv << "e,gp_min,gp_max,th_min,th_max,e_beta\n";
  for (const auto& r : scan.rows) {
    csv << fmt(r.e) << "," << fmt(r.gp_min) << "," << fmt(r.gp_max) << ","
        << fmt(r.th_min) << "," << fmt(r.th_max) << "," << fmt(scan.e_beta)
        << "\n";
  }
  csv << "# strict_gap," << (scan.strict_gap ? "true" : "false") << "\n";
  write_output(cfg, csv.str());
  return 0;
}

int run_distill(const RunConfig& cfg) {
  const auto file = load_spectrum(cfg.spectrum_path);
  const el::DiagonalState initial = state_from_flag(file.obs, cfg.p);
  const el::IntegerSpectrum ispec =
      el::integerize(file.obs, cfg.max_denominator);
  std::vector<long long> ns = cfg.copies;
  if (ns.empty()) ns = {2, 4, 8, 16, 32, 64};
  std::ostringstream csv;
  csv << "copies,tv_to_target,log_dim_max,n_eigenspaces\n";
  for (long long n : ns) {
    const el::DistillResult r = el::distilled_state(
        ispec, initial, static_cast<int>(n), cfg.mem_budget);
    csv << n << "," << fmt(r.tv_to_target) << "," << fmt(r.log_dim_max) << ","
        << r.n_eigenspaces << "\n";
  }
  write_output(cfg, csv.str());
  return 0;
}

int run_clt(const RunConfig& cfg) {
  const auto file = load_spectrum(cfg.spectrum_path);
  const el::DiagonalState initial = state_from_flag(file.obs, cfg.p);
  const el::DiagonalState target = el::gibbs_state(file.obs, cfg.beta);
  const el::DiscreteDistribution dist =
      el::subsystem_energy_change(initial, target, file.obs);
  std::vector<long long> ns = cfg.copies;
  if (ns.empty()) ns = {16, 64, 256};
  std::ostringstream csv;
  csv << "N,mu2,mu3,mu4,gauss2,gauss4,lyapunov_ratio\n";
  for (long long n : ns) {
    const std::vector<el::DiscreteDistribution> copies(
        static_cast<std::size_t>(n), dist);
    const el::MomentReport rep = el::moments_of_sum(copies, 4);
    csv << n << "," << fmt(rep.central_moments_of_mean[0]) << ","
        << fmt(rep.central_moments_of_mean[1]) << ","
        << fmt(rep.central_moments_of_mean[2]) << ","
        << fmt(rep.gaussian_reference[0]) << ","
        << fmt(rep.gaussian_reference[2]) << "," << fmt(rep.lyapunov_ratio)
        << "\n";
  }
  write_output(cfg, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"EnsembleLab: maximum-entropy ensembles, reachability oracles, "
               "Gibbs-preserving-map bounds and ensemble distillation"};
  app.require_subcommand(1);

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--spectrum", cfg.spectrum_path, "spectrum JSON file")
        ->required();
    sub->add_option("--out", cfg.out_path, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", cfg.seed, "random seed for sampling operations");
  };

  CLI::App* fit = app.add_subcommand("fit", "fit a maximum-entropy ensemble");
  add_common(fit);
  fit->add_option("--energy", cfg.energy, "target mean energy (n = 1)");
  fit->add_option("--values", cfg.values, "target mean values")->delimiter(',');
  fit->add_option("--fit-tol", cfg.fit_tol, "fit residual tolerance")
      ->check(CLI::PositiveNumber);

  CLI::App* reach = app.add_subcommand("reach", "reachability oracle");
  add_common(reach);
  reach->add_option("--energy", cfg.energy, "initial mean energy");
  reach->add_option("--values", cfg.values, "initial mean values")
      ->delimiter(',');
  reach->add_option("--beta", cfg.beta_list, "bath inverse temperature(s)")
      ->delimiter(',')
      ->required();
  reach->add_option("--p", cfg.p, "target state probabilities")
      ->delimiter(',')
      ->required();
  reach->add_option("--decision-tol", cfg.decision_tol, "margin tolerance")
      ->check(CLI::PositiveNumber);

  CLI::App* work = app.add_subcommand("work", "optimal-work bound");
  add_common(work);
  work->add_option("--energy", cfg.energy, "initial mean energy")->required();
  work->add_option("--beta", cfg.beta, "bath inverse temperature")->required();

  CLI::App* ergo = app.add_subcommand("ergotropy", "energy above passivity");
  add_common(ergo);
  ergo->add_option("--p", cfg.p, "state probabilities")
      ->delimiter(',')
      ->required();

  CLI::App* swap = app.add_subcommand("swap", "rescaled-swap protocol");
  add_common(swap);
  swap->add_option("--energy", cfg.energy, "macrostate mean energy")
      ->required();
  swap->add_option("--beta", cfg.beta, "bath inverse temperature")->required();
  swap->add_option("--p", cfg.p, "system state probabilities")
      ->delimiter(',')
      ->required();

  CLI::App* triv = app.add_subcommand("trivialize", "two-bath ergotropy scan");
  add_common(triv);
  triv->add_option("--spectrum2", cfg.spectrum2_path, "second bath spectrum");
  triv->add_option("--beta", cfg.beta, "first bath inverse temperature")
      ->required();
  triv->add_option("--beta2", cfg.beta2, "second bath inverse temperature")
      ->required();
  triv->add_option("--copies", cfg.copies, "copy numbers n1 = n2 to scan")
      ->delimiter(',');

  CLI::App* gpmap = app.add_subcommand("gpmap", "macrostate GP-map constants");
  add_common(gpmap);
  gpmap->add_option("--beta", cfg.beta, "bath inverse temperature")->required();
  gpmap->add_option("--energy", cfg.energy, "initial energy for bounds");

  CLI::App* breakdown =
      app.add_subcommand("breakdown", "equivalence-breakdown scan");
  add_common(breakdown);
  breakdown->add_option("--beta", cfg.beta, "bath inverse temperature")
      ->required();
  breakdown->add_option("--grid", cfg.grid, "number of interior grid points");

  CLI::App* distill =
      app.add_subcommand("distill", "ensemble distillation convergence");
  add_common(distill);
  distill->add_option("--p", cfg.p, "per-copy state probabilities")
      ->delimiter(',')
      ->required();
  distill->add_option("--copies", cfg.copies, "copy numbers to evaluate")
      ->delimiter(',');
  distill->add_option("--max-denominator", cfg.max_denominator,
                      "rationalization denominator cap");
  distill->add_option("--mem-budget", cfg.mem_budget,
                      "charge-lattice point budget");

  CLI::App* clt = app.add_subcommand("clt", "energy-change moment scaling");
  add_common(clt);
  clt->add_option("--p", cfg.p, "initial per-subsystem probabilities")
      ->delimiter(',')
      ->required();
  clt->add_option("--beta", cfg.beta, "bath inverse temperature")->required();
  clt->add_option("--copies", cfg.copies, "subsystem counts N to evaluate")
      ->delimiter(',');

  if (const char* env = std::getenv("ENSEMBLELAB_MEM_BUDGET")) {
    cfg.mem_budget = std::atoll(env);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n";
    // List the valid flags of the subcommand being parsed, or of the app.
    const auto parsed = app.get_subcommands();
    std::cerr << (parsed.empty() ? app.help() : parsed.front()->help());
    return 1;
  }

  try {
    if (fit->parsed()) return run_fit(cfg);
    if (reach->parsed()) return run_reach(cfg);
    if (work->parsed()) return run_work(cfg);
    if (ergo->parsed()) return run_ergotropy(cfg);
    if (swap->parsed()) return run_swap(cfg);
    if (triv->parsed()) return run_trivialize(cfg);
    if (gpmap->parsed()) return run_gpmap(cfg);
    if (breakdown->parsed()) return run_breakdown(cfg);
    if (distill->parsed()) return run_distill(cfg);
    if (clt->parsed()) return run_clt(cfg);
  } catch (const el::Error& e) {
    nlohmann::json err;
    err["error"] = std::string(e.code());
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = "internal_error";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  }
  return 1;
}
