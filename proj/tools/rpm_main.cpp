// rpm: command-line front end for RobustPhaseMax solves, simulations, sweeps and the
// lemma verification suite.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rpm/csv_io.hpp"
#include "rpm/experiment.hpp"
#include "rpm/heatmap.hpp"
#include "rpm/lemma_verifiers.hpp"
#include "rpm/robust_phasemax.hpp"

namespace fs = std::filesystem;

namespace {

// Thrown for bad user input; mapped to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

rpm::RPMConfig make_rpm_config(const std::string& mode, double lambda, double kappa,
                               const std::string& formulation, bool allow_low_kappa) {
  rpm::RPMConfig c;
  c.lambda_mode = rpm::parse_lambda_mode(mode);
  c.lambda = lambda;
  c.kappa = kappa;
  c.formulation = rpm::parse_formulation(formulation);
  c.allow_kappa_below_seven = allow_low_kappa;
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------------------

struct SolveArgs {
  std::string a, b, phi;
  std::string x0, eta;
  std::string lambda_mode = "auto7";
  double lambda = 0.0;
  double kappa = 7.0;
  std::string formulation = "nonneg";
  std::string x_out, e_out, lp_dump;
  double success_tol = 1e-6;
};

int run_solve(const SolveArgs& args) {
  rpm::RPMConfig config;
  try {
    config = make_rpm_config(args.lambda_mode, args.lambda, args.kappa, args.formulation, false);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const rpm::SensingMatrix A = rpm::read_matrix_csv(args.a);
  const rpm::Vector b = rpm::read_vector_csv(args.b);
  const rpm::Signal phi = rpm::read_vector_csv(args.phi);

  if (!args.lp_dump.empty()) {
    const double lambda = rpm::resolve_lambda(config, b);
    auto out = open_out(args.lp_dump);
    switch (config.formulation) {
      case rpm::Formulation::NonnegSlack: rpm::write_lp(out, rpm::build_rpm(A, b, phi, lambda)); break;
      case rpm::Formulation::L1Split: rpm::write_lp(out, rpm::build_rpm_l1(A, b, phi, lambda)); break;
      case rpm::Formulation::PlainPhaseMax: rpm::write_lp(out, rpm::build_phasemax(A, b, phi)); break;
    }
  }

  rpm::RecoveryReport report = rpm::solve_rpm(A, b, phi, config);
  std::cout << "status=" << rpm::to_string(report.status)
            << " lambda=" << rpm::format_double(report.lambda)
            << " objective=" << rpm::format_double(report.objective_value)
            << " iterations=" << report.iterations;
  if (!args.x0.empty()) {
    const rpm::Signal x0 = rpm::read_vector_csv(args.x0);
    const rpm::Vector eta = args.eta.empty() ? rpm::Vector::Zero(A.rows()) : rpm::read_vector_csv(args.eta);
    rpm::score_recovery(report, {x0, eta, false, args.success_tol});
    std::cout << " rel_err_signed=" << rpm::format_double(*report.rel_err_signed)
              << " rel_err_sym=" << rpm::format_double(*report.rel_err_sym)
              << " slack_residual=" << rpm::format_double(*report.slack_residual)
              << " success=" << (*report.success ? "true" : "false");
  }
  std::cout << '\n';

  if (report.status != rpm::LPStatus::Optimal) return 1;
  if (!args.x_out.empty()) rpm::write_vector_csv(args.x_out, report.x_hat);
  if (!args.e_out.empty()) rpm::write_vector_csv(args.e_out, report.e_hat);
  if (args.x_out.empty()) {
    std::cout << "# x_hat\n";
    for (rpm::Index i = 0; i < report.x_hat.size(); ++i) std::cout << rpm::format_double(report.x_hat[i]) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------------------

struct SimulateArgs {
  rpm::Index n = 20;
  rpm::Index m = 400;
  double delta = 0.05;
  std::string model = "shrink";
  double magnitude_scale = 1.0;
  std::string anchor = "oracle";
  double anchor_err = 0.3;
  double truncation_factor = 3.0;
  std::string lambda_mode = "auto7";
  double lambda = 0.0;
  double kappa = 7.0;
  std::string formulation = "nonneg";
  std::uint64_t seed = 1;
  double success_tol = 1e-6;
  bool timing = false;
  bool csv = false;
  std::string dump;
};

int run_simulate(const SimulateArgs& args) {
  rpm::TrialConfig cfg;
  try {
    cfg.n = args.n;
    cfg.m = args.m;
    cfg.corruption = {args.delta, rpm::parse_corruption_model(args.model), args.magnitude_scale};
    cfg.anchor = rpm::parse_anchor_mode(args.anchor);
    cfg.anchor_err = args.anchor_err;
    cfg.truncation_factor = args.truncation_factor;
    cfg.rpm = make_rpm_config(args.lambda_mode, args.lambda, args.kappa, args.formulation, true);
    cfg.seed = args.seed;
    cfg.success_tol = args.success_tol;
    cfg.record_timing = args.timing;
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (!args.dump.empty()) {
    const rpm::TrialInstance in = rpm::make_trial_instance(cfg);
    const fs::path dir(args.dump);
    fs::create_directories(dir);
    rpm::write_matrix_csv(dir / "A.csv", in.measurements.sensing);
    rpm::write_vector_csv(dir / "b.csv", in.measurements.b);
    rpm::write_vector_csv(dir / "phi.csv", in.phi);
    rpm::write_vector_csv(dir / "x0.csv", in.x0);
    rpm::write_vector_csv(dir / "eta.csv", in.measurements.eta);
  }

  const rpm::TrialResult r = rpm::run_trial(cfg);
  if (args.csv) {
    rpm::write_trials_csv(std::cout, {r});
    return 0;
  }
  std::cout << "status=" << rpm::to_string(r.status) << " success=" << (r.success ? "true" : "false")
            << " rel_err_signed=" << rpm::format_double(r.rel_err_signed)
            << " rel_err_sym=" << rpm::format_double(r.rel_err_sym)
            << " slack_residual=" << rpm::format_double(r.slack_residual)
            << " anchor_error=" << rpm::format_double(r.anchor_error)
            << " lp_iterations=" << r.lp_iterations;
  if (args.timing) std::cout << " runtime_ms=" << rpm::format_double(r.runtime_ms);
  std::cout << '\n';
  return 0;
}

// ---------------------------------------------------------------------------------------

struct SweepArgs {
  std::string config;
  std::map<std::string, std::string> overrides;  // sweep key -> raw flag value
  bool timing = false;
  std::string out;
  std::string summary;
  std::string heatmap;
  std::string heatmap_x = "m_over_n";
  std::string heatmap_y = "delta";
};

int run_sweep_cmd(const SweepArgs& args) {
  rpm::SweepGrid grid;
  try {
    if (!args.config.empty()) {
      std::ifstream in(args.config);
      if (!in) throw std::invalid_argument("cannot open config " + args.config);
      grid = rpm::parse_sweep_config(in);
    }
    for (const auto& [key, value] : args.overrides) rpm::set_sweep_option(grid, key, value);
    if (args.timing) grid.record_timing = true;
    grid.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const rpm::SweepResult result = rpm::run_sweep(grid);
  {
    auto out = open_out(args.out);
    rpm::write_trials_csv(out, result.trials);
  }
  fs::path summary = args.summary;
  if (summary.empty()) {
    summary = fs::path(args.out);
    summary.replace_filename(summary.stem().string() + "_summary.csv");
  }
  {
    auto out = open_out(summary);
    rpm::write_summary_csv(out, result.cells);
  }
  if (!args.heatmap.empty()) rpm::emit_heatmap(summary, args.heatmap_x, args.heatmap_y, args.heatmap);

  int successes = 0;
  for (const auto& c : result.cells) successes += c.successes;
  std::cerr << result.cells.size() << " cells, " << result.trials.size() << " trials, " << successes
            << " successes -> " << args.out << ", " << summary.string() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------------------

int run_verify(const rpm::LemmaSuiteOptions& opts, const std::string& report) {
  if (report != "table" && report != "csv") throw ConfigError("--report must be table or csv");
  const auto checks = rpm::run_lemma_suite(opts);
  bool all = true;
  for (const auto& c : checks) all = all && c.passed;

  if (report == "csv") {
    std::cout << "check,relation,observed,bound,passed\n";
    for (const auto& c : checks) {
      std::cout << '"' << c.name << "\"," << c.relation << ',' << rpm::format_double(c.observed) << ','
                << rpm::format_double(c.bound) << ',' << (c.passed ? "true" : "false") << '\n';
    }
  } else {
    std::size_t width = 0;
    for (const auto& c : checks) width = std::max(width, c.name.size());
    for (const auto& c : checks) {
      std::cout << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width))
                << c.name << "  " << std::setw(10) << std::setprecision(6) << c.observed << ' '
                << c.relation << ' ' << c.bound << '\n';
    }
    std::cout << (all ? "all lemma checks passed" : "some lemma checks FAILED") << '\n';
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RobustPhaseMax: LP phase retrieval with sparse corruptions"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance from CSV files");
  solve_cmd->add_option("--A", solve.a, "Sensing matrix, m rows of n values")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--b", solve.b, "Magnitudes, m values")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--phi", solve.phi, "Anchor, n values")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--lambda-mode", solve.lambda_mode, "explicit | auto7 | scaled")->capture_default_str();
  solve_cmd->add_option("--lambda", solve.lambda, "Penalty for --lambda-mode explicit");
  solve_cmd->add_option("--kappa", solve.kappa, "Multiplier for --lambda-mode scaled (>= 7)")->capture_default_str();
  solve_cmd->add_option("--formulation", solve.formulation, "nonneg | l1 | plain")->capture_default_str();
  solve_cmd->add_option("--x-out", solve.x_out, "Write x_hat here (default: stdout)");
  solve_cmd->add_option("--e-out", solve.e_out, "Write e_hat here");
  solve_cmd->add_option("--lp-dump", solve.lp_dump, "Write the assembled LP in text form");
  solve_cmd->add_option("--x0", solve.x0, "Ground truth, enables error metrics")->check(CLI::ExistingFile);
  solve_cmd->add_option("--eta", solve.eta, "Ground-truth corruption (default zero)")->check(CLI::ExistingFile);
  solve_cmd->add_option("--success-tol", solve.success_tol)->capture_default_str();

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run one seeded recovery trial");
  sim_cmd->add_option("--n", sim.n)->capture_default_str();
  sim_cmd->add_option("--m", sim.m)->capture_default_str();
  sim_cmd->add_option("--delta", sim.delta, "Corrupted fraction")->capture_default_str();
  sim_cmd->add_option("--model", sim.model, "shrink | inflate | mixed | worst")->capture_default_str();
  sim_cmd->add_option("--magnitude-scale", sim.magnitude_scale)->capture_default_str();
  sim_cmd->add_option("--anchor", sim.anchor, "oracle | spectral")->capture_default_str();
  sim_cmd->add_option("--anchor-err", sim.anchor_err, "Oracle anchor relative error")->capture_default_str();
  sim_cmd->add_option("--truncation-factor", sim.truncation_factor, "Spectral anchor")->capture_default_str();
  sim_cmd->add_option("--lambda-mode", sim.lambda_mode, "explicit | auto7 | scaled")->capture_default_str();
  sim_cmd->add_option("--lambda", sim.lambda);
  sim_cmd->add_option("--kappa", sim.kappa, "Multiplier for scaled mode; values below 7 allowed")->capture_default_str();
  sim_cmd->add_option("--formulation", sim.formulation, "nonneg | l1 | plain")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed)->capture_default_str();
  sim_cmd->add_option("--success-tol", sim.success_tol)->capture_default_str();
  sim_cmd->add_flag("--timing", sim.timing, "Record wall time");
  sim_cmd->add_flag("--csv", sim.csv, "Print the trial as a CSV row with header");
  sim_cmd->add_option("--dump", sim.dump, "Write A, b, phi, x0, eta CSVs into this directory");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a grid of trials");
  sweep_cmd->add_option("--config", sweep.config, "key = value file")->check(CLI::ExistingFile);
  const std::vector<std::pair<std::string, std::string>> sweep_flags = {
      {"--n", "n"},
      {"--ratios", "ratios"},
      {"--deltas", "deltas"},
      {"--anchor-errs", "anchor_errs"},
      {"--kappas", "kappas"},
      {"--trials", "trials"},
      {"--seed", "seed"},
      {"--model", "model"},
      {"--magnitude-scale", "magnitude_scale"},
      {"--anchor", "anchor"},
      {"--truncation-factor", "truncation_factor"},
      {"--formulation", "formulation"},
      {"--success-tol", "success_tol"},
  };
  for (const auto& [flag, key] : sweep_flags) {
    sweep_cmd->add_option_function<std::string>(
        flag, [&sweep, key = key](const std::string& v) { sweep.overrides[key] = v; },
        "overrides config key '" + key + "'");
  }
  sweep_cmd->add_flag("--timing", sweep.timing, "Record runtime_ms (output is then not byte-reproducible)");
  sweep_cmd->add_option("--out", sweep.out, "Per-trial CSV")->required();
  sweep_cmd->add_option("--summary", sweep.summary, "Per-cell CSV (default <out>_summary.csv)");
  sweep_cmd->add_option("--heatmap", sweep.heatmap, "SVG success-rate plot");
  sweep_cmd->add_option("--heatmap-x", sweep.heatmap_x)->capture_default_str();
  sweep_cmd->add_option("--heatmap-y", sweep.heatmap_y)->capture_default_str();

  std::string hm_summary, hm_x = "m_over_n", hm_y = "delta", hm_out;
  auto* hm_cmd = app.add_subcommand("heatmap", "Plot a sweep summary CSV");
  hm_cmd->add_option("--summary", hm_summary)->required()->check(CLI::ExistingFile);
  hm_cmd->add_option("--x", hm_x)->capture_default_str();
  hm_cmd->add_option("--y", hm_y)->capture_default_str();
  hm_cmd->add_option("--out", hm_out)->required();

  rpm::LemmaSuiteOptions lemma;
  std::string report = "table";
  auto* lemma_cmd = app.add_subcommand("verify-lemmas", "Monte Carlo checks of the lemma constants");
  lemma_cmd->add_option("--report", report, "table | csv")->capture_default_str();
  lemma_cmd->add_option("--seed", lemma.seed)->capture_default_str();
  lemma_cmd->add_option("--samples", lemma.theta_samples, "Samples per theta")->capture_default_str();
  lemma_cmd->add_option("--grid", lemma.theta_grid, "theta grid points on [0, pi]")->capture_default_str();
  lemma_cmd->add_option("--n", lemma.n)->capture_default_str();
  lemma_cmd->add_option("--m-large", lemma.m_large)->capture_default_str();
  lemma_cmd->add_option("--operator-trials", lemma.operator_trials)->capture_default_str();
  lemma_cmd->add_option("--directions", lemma.lower_bound_directions)->capture_default_str();
  lemma_cmd->add_option("--direction-trials", lemma.lower_bound_trials)->capture_default_str();
  lemma_cmd->add_option("--rowset-n", lemma.rowset_n)->capture_default_str();
  lemma_cmd->add_option("--rowset-m", lemma.rowset_m)->capture_default_str();
  lemma_cmd->add_option("--rowset-delta", lemma.rowset_delta)->capture_default_str();
  lemma_cmd->add_option("--rowset-trials", lemma.rowset_trials)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*solve_cmd) return run_solve(solve);
    if (*sim_cmd) return run_simulate(sim);
    if (*sweep_cmd) return run_sweep_cmd(sweep);
    if (*hm_cmd) {
      const auto info = rpm::emit_heatmap(hm_summary, hm_x, hm_y, hm_out);
      std::cerr << info.columns << " x " << info.rows << " grid, " << info.cells << " cells -> " << hm_out << '\n';
      return 0;
    }
    if (*lemma_cmd) return run_verify(lemma, report);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
