// Command-line front end: chain volatility checks, optimal-scaling tables,
// efficiency-curve CSVs, tempering sweeps, ladder oracles, and the
// rate-vs-curve fit. A key=value config file can preload any option
// (--config, [subcommand] sections); explicit flags win.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "tempermc/tempermc.hpp"

namespace {

using namespace tempermc;

std::vector<Mode> parse_modes(const std::string& mode) {
  if (mode == "rev") return {Mode::reversible};
  if (mode == "nonrev") return {Mode::nonreversible};
  if (mode == "both") return {Mode::reversible, Mode::nonreversible};
  throw CLI::ValidationError("--mode", "must be one of rev, nonrev, both");
}

std::string plot_script_path(const std::string& csv_path) {
  const auto dot = csv_path.rfind('.');
  const std::string stem = dot == std::string::npos ? csv_path : csv_path.substr(0, dot);
  return stem + "_plot.py";
}

int cmd_volatility(double a, double b, double c, std::int64_t steps, int replicates,
                   std::uint64_t seed) {
  const ChainParams params(a, b, c);
  const double v = theoretical_volatility(params);
  const VolatilityEstimate est = estimate_volatility(params, steps, replicates, seed);
  std::printf("chain params        A=%.6g B=%.6g C=%.6g\n", params.a(), params.b(), params.c());
  std::printf("theoretical v       %.10g\n", v);
  std::printf("estimated v         %.10g +- %.3g  (%d replicates x %lld steps)\n", est.v_hat,
              est.std_err, est.replicates, static_cast<long long>(est.steps_per_replicate));
  const double dev = std::abs(est.v_hat - v);
  const bool pass = dev <= 4.0 * est.std_err || dev <= 1e-12;
  std::printf("|v_hat - v|         %.3g  (4*std_err = %.3g)  -> %s\n", dev, 4.0 * est.std_err,
              pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

int cmd_optimal(double c) {
  const OptimalScaling rev = optimize(Mode::reversible, c);
  const OptimalScaling nonrev = optimize(Mode::nonreversible, c);
  std::printf("mode            ell_opt       acc_opt       eff_opt\n");
  std::printf("reversible      %-13.6g %-13.6g %-13.6g\n", rev.ell_opt, rev.acc_opt, rev.eff_opt);
  std::printf("nonreversible   %-13.6g %-13.6g %-13.6g\n", nonrev.ell_opt, nonrev.acc_opt,
              nonrev.eff_opt);
  std::printf("efficiency ratio nonreversible/reversible: %.6g\n", nonrev.eff_opt / rev.eff_opt);
  return 0;
}

int cmd_curves(double c, int grid, const std::string& out) {
  write_curves_csv(out, c, grid);
  const std::string script = plot_script_path(out);
  write_curves_plot_script(script, out, c);
  std::printf("wrote %s and %s\n", out.c_str(), script.c_str());
  return 0;
}

int cmd_sweep(const SweepConfig& config, const std::string& out) {
  const std::vector<SweepPoint> points = run_sweep(config);
  write_sweep_csv(out, config, points);
  std::size_t failed = 0;
  for (const SweepPoint& p : points) {
    if (!p.ok) ++failed;
  }
  std::printf("wrote %s (%zu points, %zu failed)\n", out.c_str(), points.size(), failed);
  return 0;
}

int cmd_oracle(int d, double beta_min, double target_acc, int n_levels, const std::string& out) {
  Ladder ladder = n_levels > 0
                      ? [&] {
                          std::vector<double> betas(static_cast<std::size_t>(n_levels) + 1);
                          const double r = std::exp(std::log(beta_min) / n_levels);
                          betas[0] = 1.0;
                          for (int k = 1; k < n_levels; ++k) betas[static_cast<std::size_t>(k)] = std::pow(r, k);
                          betas.back() = beta_min;
                          return Ladder(betas);
                        }()
                      : build_ladder(beta_min, target_acc, d);
  const EdgeAcceptances edges = ladder_edge_acceptances(ladder, d);
  const RoundTripRate rev = round_trip_rate_reversible(edges);
  const RoundTripRate nonrev = round_trip_rate_nonreversible(edges);

  double acc_min = 1.0, acc_max = 0.0, acc_sum = 0.0;
  for (double a : edges.up) {
    acc_min = std::min(acc_min, a);
    acc_max = std::max(acc_max, a);
    acc_sum += a;
  }
  std::printf("ladder              %zu levels, beta from 1 down to %.6g\n", ladder.levels(),
              ladder.betas().back());
  std::printf("edge acceptance     min=%.6g mean=%.6g max=%.6g\n", acc_min,
              acc_sum / static_cast<double>(edges.up.size()), acc_max);
  std::printf("mean proposal acc   %.6g (uniform occupancy, incl. boundary auto-rejects)\n",
              mean_proposal_acceptance(edges));
  std::printf("reversible          cycle=%.6g steps, rate=%.6g per million\n",
              rev.expected_cycle_steps, rev.rate_per_step * 1e6);
  std::printf("nonreversible       cycle=%.6g steps, rate=%.6g per million\n",
              nonrev.expected_cycle_steps, nonrev.rate_per_step * 1e6);

  if (!out.empty()) {
    CsvWriter csv(out);
    csv.row({"edge", "beta_from", "beta_to", "acc_up", "acc_down"});
    for (std::size_t k = 0; k < edges.up.size(); ++k) {
      csv.row({std::to_string(k), format_double(ladder.beta(k)), format_double(ladder.beta(k + 1)),
               format_double(edges.up[k]), format_double(edges.down[k])});
    }
    std::printf("wrote %s\n", out.c_str());
  }
  return 0;
}

int cmd_fit(const std::string& in, const std::string& c_effective, const std::string& out) {
  const SweepData data = read_sweep_csv(in);
  if (data.modes.empty()) throw std::runtime_error("no data rows in " + in);
  double c_eff;
  if (c_effective == "auto") {
    c_eff = data.beta_min > 0.0 ? default_fit_constant(data.beta_min) : 1.0;
  } else {
    c_eff = std::stod(c_effective);
  }
  std::printf("c_effective         %.6g\n", c_eff);

  CsvWriter csv(out.empty() ? "/dev/null" : out);
  csv.row({"mode", "acc", "rate_per_million", "fitted_curve", "rel_dev"});
  std::vector<FitResult> results;
  for (std::size_t m = 0; m < data.modes.size(); ++m) {
    const Mode mode = data.modes[m];
    const FitResult fit = fit_scale(data.accs[m], data.rates[m], mode, c_eff);
    results.push_back(fit);
    for (std::size_t i = 0; i < data.accs[m].size(); ++i) {
      const double curve = fit.scale * efficiency_from_acceptance(mode, data.accs[m][i], c_eff);
      csv.row({mode_name(mode), format_double(data.accs[m][i]), format_double(data.rates[m][i]),
               format_double(curve), format_double(data.rates[m][i] / curve - 1.0)});
    }
    std::printf("%-14s scale=%.6g max_rel_dev=%.4f argmax_acc_sim=%.4f argmax_acc_theory=%.4f\n",
                mode_name(mode), fit.scale, fit.max_rel_dev, fit.argmax_acc_sim,
                fit.argmax_acc_theory);
  }
  if (results.size() == 2) {
    std::printf("scale ratio         %.6g\n", results[1].scale / results[0].scale);
  }
  if (!out.empty()) std::printf("wrote %s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo toolkit for reversible and lifted tempering dynamics"};
  app.require_subcommand(1);
  app.set_config("--config")->configurable(false);

  // volatility
  double vol_a = 0.25, vol_b = 0.25, vol_c = 0.5;
  std::int64_t vol_steps = 1'000'000;
  int vol_replicates = 100;
  std::uint64_t vol_seed = 1;
  CLI::App* volatility = app.add_subcommand(
      "volatility", "verify the lifted-chain volatility formula by simulation");
  volatility->add_option("--a", vol_a, "right-move probability on the + row");
  volatility->add_option("--b", vol_b, "left-move probability on the + row");
  volatility->add_option("--c", vol_c, "row-flip probability");
  volatility->add_option("--steps", vol_steps, "steps per replicate (>= 1e4)");
  volatility->add_option("--replicates", vol_replicates, "independent replicates (>= 10)");
  volatility->add_option("--seed", vol_seed, "base seed");

  // optimal
  double opt_c = 1.0;
  CLI::App* optimal = app.add_subcommand("optimal", "optimal scaling constants for both modes");
  optimal->add_option("--c", opt_c, "problem constant c > 0");

  // curves
  double curves_c = 1.0;
  int curves_grid = 189;
  std::string curves_out = "curves.csv";
  CLI::App* curves = app.add_subcommand("curves", "efficiency-vs-acceptance curve table");
  curves->add_option("--c", curves_c, "problem constant c > 0");
  curves->add_option("--grid", curves_grid, "number of acceptance grid rows");
  curves->add_option("--out", curves_out, "output CSV path");

  // sweep
  SweepConfig sweep_config;
  int sweep_grid = 20;
  std::string sweep_mode = "both";
  std::string sweep_out = "sweep.csv";
  CLI::App* sweep = app.add_subcommand("sweep", "round-trip rate sweep over an acceptance grid");
  sweep->add_option("--d", sweep_config.d, "target dimension");
  sweep->add_option("--beta-min", sweep_config.beta_min, "hottest inverse temperature");
  sweep->add_option("--iters", sweep_config.iterations_per_point, "iterations per sweep point");
  sweep->add_option("--seed", sweep_config.seed, "sweep seed");
  sweep->add_option("--grid", sweep_grid, "number of acceptance grid points");
  sweep->add_option("--mode", sweep_mode, "rev, nonrev, or both")
      ->check(CLI::IsMember({"rev", "nonrev", "both"}));
  sweep->add_option("--out", sweep_out, "output CSV path");

  // oracle
  int oracle_d = 100;
  double oracle_beta_min = 0.1;
  double oracle_target = 0.387;
  int oracle_levels = 0;
  std::string oracle_out;
  CLI::App* oracle = app.add_subcommand("oracle", "exact round-trip rates for a ladder");
  oracle->add_option("--d", oracle_d, "target dimension");
  oracle->add_option("--beta-min", oracle_beta_min, "hottest inverse temperature");
  oracle->add_option("--target-acc", oracle_target, "ladder spacing target acceptance");
  oracle->add_option("--n-levels", oracle_levels,
                     "build a geometric ladder with this many edges instead of --target-acc");
  oracle->add_option("--out", oracle_out, "optional per-edge CSV path");

  // fit
  std::string fit_in;
  std::string fit_c = "auto";
  std::string fit_out = "fit.csv";
  CLI::App* fit = app.add_subcommand("fit", "fit one scale constant per mode to sweep rates");
  fit->add_option("--in", fit_in, "sweep CSV path")->required();
  fit->add_option("--c-effective", fit_c, "problem constant, or 'auto' from sweep metadata");
  fit->add_option("--out", fit_out, "fitted-curve CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (volatility->parsed()) {
      return cmd_volatility(vol_a, vol_b, vol_c, vol_steps, vol_replicates, vol_seed);
    }
    if (optimal->parsed()) return cmd_optimal(opt_c);
    if (curves->parsed()) return cmd_curves(curves_c, curves_grid, curves_out);
    if (sweep->parsed()) {
      sweep_config.acceptance_grid = SweepConfig::default_grid(sweep_grid);
      sweep_config.modes = parse_modes(sweep_mode);
      return cmd_sweep(sweep_config, sweep_out);
    }
    if (oracle->parsed()) {
      return cmd_oracle(oracle_d, oracle_beta_min, oracle_target, oracle_levels, oracle_out);
    }
    if (fit->parsed()) return cmd_fit(fit_in, fit_c, fit_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
