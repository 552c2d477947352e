#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rpm/lp.hpp"
#include "rpm/measurements.hpp"
#include "rpm/robust_phasemax.hpp"

namespace rpm {

enum class AnchorMode { Oracle, Spectral };

std::string_view to_string(AnchorMode mode);
AnchorMode parse_anchor_mode(std::string_view name);

struct TrialConfig {
  Index n = 20;
  Index m = 400;
  CorruptionSpec corruption;
  AnchorMode anchor = AnchorMode::Oracle;
  double anchor_err = 0.3;         ///< Oracle: ||phi - x0|| / ||x0||
  double truncation_factor = 3.0;  ///< Spectral
  RPMConfig rpm;
  std::uint64_t seed = 1;
  double success_tol = 1e-6;
  double signal_norm = 1.0;
  bool record_timing = false;  ///< runtime_ms stays 0 otherwise, keeping output deterministic

  void validate() const;
};

struct TrialResult {
  TrialConfig config;
  LPStatus status = LPStatus::IterationLimit;
  double rel_err_signed = 0.0;
  double rel_err_sym = 0.0;
  double slack_residual = 0.0;
  bool success = false;
  long lp_iterations = 0;
  double runtime_ms = 0.0;
  double anchor_error = 0.0;  ///< realized sign-aware anchor error; not part of the CSV row
};

/// The data a trial solves: truth, measurements and anchor, regenerated from cfg.seed.
struct TrialInstance {
  Signal x0;
  MeasurementSet measurements;
  Signal phi;
};
TrialInstance make_trial_instance(const TrialConfig& cfg);

/// generate -> corrupt -> anchor -> solve -> score. Deterministic in config.seed.
TrialResult run_trial(const TrialConfig& cfg);

/// One data row of a sweep, exactly as it appears in the CSV.
struct TrialRow {
  long n = 0;
  long m = 0;
  double delta = 0.0;
  std::string model;
  std::string anchor_mode;
  double anchor_err = 0.0;
  std::string lambda_mode;
  double kappa = 0.0;
  std::uint64_t seed = 0;
  std::string status;
  double rel_err_signed = 0.0;
  double rel_err_sym = 0.0;
  double slack_residual = 0.0;
  bool success = false;
  long lp_iterations = 0;
  double runtime_ms = 0.0;

  bool operator==(const TrialRow& other) const;
};

inline constexpr std::string_view kTrialCsvHeader =
    "n,m,delta,model,anchor_mode,anchor_err,lambda_mode,kappa,seed,status,rel_err_signed,"
    "rel_err_sym,slack_residual,success,lp_iterations,runtime_ms";

TrialRow to_row(const TrialResult& result);
std::string format_row(const TrialRow& row);
TrialRow parse_row(std::string_view line);

/// Header line plus one row per result.
void write_trials_csv(std::ostream& os, const std::vector<TrialResult>& results);
std::vector<TrialRow> read_trials_csv(std::istream& is);

struct SweepGrid {
  Index n = 20;
  std::vector<double> ratios{20.0};  ///< m = round(ratio * n)
  std::vector<double> deltas{0.05};
  std::vector<double> anchor_errs{0.3};
  std::vector<double> kappas{7.0};  ///< lambda = kappa * norm_estimate(b) / m
  int trials = 10;
  std::uint64_t base_seed = 1;
  CorruptionModel model = CorruptionModel::ShrinkToZero;
  double magnitude_scale = 1.0;
  AnchorMode anchor = AnchorMode::Oracle;
  double truncation_factor = 3.0;
  Formulation formulation = Formulation::NonnegSlack;
  double success_tol = 1e-6;
  bool record_timing = false;

  void validate() const;

  /// Cells in (ratio, delta, anchor_err, kappa) row-major order; trial seeds unset.
  std::vector<TrialConfig> cells() const;
};

/// seed for trial t of cell c: hash64(base_seed, c, t)
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t cell, std::size_t trial);

struct CellSummary {
  TrialConfig cell;
  int trials = 0;
  int successes = 0;
  double success_rate() const { return trials ? static_cast<double>(successes) / trials : 0.0; }
};

struct SweepResult {
  std::vector<TrialResult> trials;  ///< (cell, trial) order
  std::vector<CellSummary> cells;
};

SweepResult run_sweep(const SweepGrid& grid);

inline constexpr std::string_view kSummaryCsvHeader =
    "n,m,m_over_n,delta,model,anchor_mode,anchor_err,lambda_mode,kappa,formulation,trials,"
    "successes,success_rate";

void write_summary_csv(std::ostream& os, const std::vector<CellSummary>& cells);

/// `key = value` per line, lists comma-separated, '#' starts a comment.
SweepGrid parse_sweep_config(std::istream& is);

/// Applies one key/value pair; shared by the config parser and the CLI flags.
void set_sweep_option(SweepGrid& grid, std::string_view key, std::string_view value);

}  // namespace rpm
