#include "rpm/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rpm/anchor.hpp"
#include "rpm/csv_io.hpp"
#include "rpm/parallel.hpp"

namespace rpm {

std::string_view to_string(AnchorMode mode) {
  return mode == AnchorMode::Oracle ? "oracle" : "spectral";
}

AnchorMode parse_anchor_mode(std::string_view name) {
  if (name == "oracle" || name == "Oracle") return AnchorMode::Oracle;
  if (name == "spectral" || name == "Spectral") return AnchorMode::Spectral;
  throw std::invalid_argument("unknown anchor mode '" + std::string(name) + "'");
}

void TrialConfig::validate() const {
  if (n < 1 || m < 1) throw std::invalid_argument("trial: n and m must be >= 1");
  corruption.validate();
  if (anchor == AnchorMode::Oracle && (!(anchor_err >= 0.0) || anchor_err >= 0.5)) {
    throw std::invalid_argument("trial: oracle anchor error must lie in [0, 0.5)");
  }
  if (anchor == AnchorMode::Spectral) {
    if (m < n) throw std::invalid_argument("trial: spectral anchor requires m >= n");
    if (!(truncation_factor > 0.0)) {
      throw std::invalid_argument("trial: truncation factor must be positive");
    }
  }
  rpm.validate();
  if (!(success_tol > 0.0)) throw std::invalid_argument("trial: success_tol must be positive");
  if (!(signal_norm > 0.0)) throw std::invalid_argument("trial: signal norm must be positive");
}

TrialInstance make_trial_instance(const TrialConfig& cfg) {
  cfg.validate();
  TrialInstance in;
  Engine signal_rng = make_engine(cfg.seed, Stream::Signal);
  in.x0 = gen_signal(cfg.n, cfg.signal_norm, signal_rng);
  in.measurements = make_measurements(cfg.m, in.x0, cfg.corruption, cfg.seed);

  if (cfg.anchor == AnchorMode::Oracle) {
    Engine anchor_rng = make_engine(cfg.seed, Stream::Anchor);
    in.phi = oracle_anchor(in.x0, cfg.anchor_err, anchor_rng);
  } else {
    Engine power_rng = make_engine(cfg.seed, Stream::PowerIteration);
    SpectralInitOptions opts;
    opts.truncation_factor = cfg.truncation_factor;
    in.phi = spectral_init(in.measurements.sensing, in.measurements.b, opts, power_rng).phi;
  }
  return in;
}

TrialResult run_trial(const TrialConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const TrialInstance in = make_trial_instance(cfg);
  const MeasurementSet& ms = in.measurements;
  const Signal& x0 = in.x0;
  const Signal& phi = in.phi;

  RecoveryReport report = solve_rpm(ms.sensing, ms.b, phi, cfg.rpm);
  GroundTruth truth{x0, ms.eta, cfg.anchor == AnchorMode::Spectral, cfg.success_tol};
  score_recovery(report, truth);

  TrialResult r;
  r.config = cfg;
  r.status = report.status;
  r.rel_err_signed = *report.rel_err_signed;
  r.rel_err_sym = *report.rel_err_sym;
  r.slack_residual = *report.slack_residual;
  r.success = *report.success;
  r.lp_iterations = report.iterations;
  const auto [anchor_signed, anchor_sym] = recovery_metrics(phi, x0);
  r.anchor_error = cfg.anchor == AnchorMode::Spectral ? anchor_sym : anchor_signed;
  if (cfg.record_timing) {
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                             start)
                       .count();
  }
  return r;
}

// ---------------------------------------------------------------------------------------
// CSV rows

namespace {

bool same_double(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

double kappa_of(const RPMConfig& rpm) {
  switch (rpm.lambda_mode) {
    case LambdaMode::Explicit: return rpm.lambda;
    case LambdaMode::AutoSeven: return 7.0;
    case LambdaMode::AutoScaled: return rpm.kappa;
  }
  return rpm.kappa;
}

template <typename Int>
Int parse_integer(std::string_view token, const char* field) {
  Int value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
    throw std::invalid_argument(std::string("bad integer in field ") + field + ": '" +
                                std::string(token) + "'");
  }
  return value;
}

bool parse_bool(std::string_view token) {
  if (token == "1" || token == "true") return true;
  if (token == "0" || token == "false") return false;
  throw std::invalid_argument("bad boolean '" + std::string(token) + "'");
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<double> parse_list(std::string_view value) {
  std::vector<double> out;
  for (const auto& field : split_fields(value)) {
    const std::string t = trim(field);
    if (!t.empty()) out.push_back(parse_double(t));
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

}  // namespace

bool TrialRow::operator==(const TrialRow& o) const {
  return n == o.n && m == o.m && same_double(delta, o.delta) && model == o.model &&
         anchor_mode == o.anchor_mode && same_double(anchor_err, o.anchor_err) &&
         lambda_mode == o.lambda_mode && same_double(kappa, o.kappa) && seed == o.seed &&
         status == o.status && same_double(rel_err_signed, o.rel_err_signed) &&
         same_double(rel_err_sym, o.rel_err_sym) &&
         same_double(slack_residual, o.slack_residual) && success == o.success &&
         lp_iterations == o.lp_iterations && same_double(runtime_ms, o.runtime_ms);
}

TrialRow to_row(const TrialResult& r) {
  const TrialConfig& c = r.config;
  TrialRow row;
  row.n = static_cast<long>(c.n);
  row.m = static_cast<long>(c.m);
  row.delta = c.corruption.fraction;
  row.model = std::string(to_string(c.corruption.model));
  row.anchor_mode = std::string(to_string(c.anchor));
  row.anchor_err = c.anchor == AnchorMode::Oracle ? c.anchor_err : c.truncation_factor;
  row.lambda_mode = std::string(to_string(c.rpm.lambda_mode));
  row.kappa = kappa_of(c.rpm);
  row.seed = c.seed;
  row.status = std::string(to_string(r.status));
  row.rel_err_signed = r.rel_err_signed;
  row.rel_err_sym = r.rel_err_sym;
  row.slack_residual = r.slack_residual;
  row.success = r.success;
  row.lp_iterations = r.lp_iterations;
  row.runtime_ms = r.runtime_ms;
  return row;
}

std::string format_row(const TrialRow& r) {
  std::ostringstream os;
  os << r.n << ',' << r.m << ',' << format_double(r.delta) << ',' << r.model << ','
     << r.anchor_mode << ',' << format_double(r.anchor_err) << ',' << r.lambda_mode << ','
     << format_double(r.kappa) << ',' << r.seed << ',' << r.status << ','
     << format_double(r.rel_err_signed) << ',' << format_double(r.rel_err_sym) << ','
     << format_double(r.slack_residual) << ',' << (r.success ? 1 : 0) << ',' << r.lp_iterations
     << ',' << format_double(r.runtime_ms);
  return os.str();
}

TrialRow parse_row(std::string_view line) {
  const auto f = split_fields(line);
  if (f.size() != 16) {
    throw std::invalid_argument("trial row has " + std::to_string(f.size()) +
                                " fields, expected 16");
  }
  TrialRow r;
  r.n = parse_integer<long>(f[0], "n");
  r.m = parse_integer<long>(f[1], "m");
  r.delta = parse_double(f[2]);
  r.model = f[3];
  r.anchor_mode = f[4];
  r.anchor_err = parse_double(f[5]);
  r.lambda_mode = f[6];
  r.kappa = parse_double(f[7]);
  r.seed = parse_integer<std::uint64_t>(f[8], "seed");
  r.status = f[9];
  r.rel_err_signed = parse_double(f[10]);
  r.rel_err_sym = parse_double(f[11]);
  r.slack_residual = parse_double(f[12]);
  r.success = parse_bool(f[13]);
  r.lp_iterations = parse_integer<long>(f[14], "lp_iterations");
  r.runtime_ms = parse_double(f[15]);
  return r;
}

void write_trials_csv(std::ostream& os, const std::vector<TrialResult>& results) {
  os << kTrialCsvHeader << '\n';
  for (const auto& r : results) os << format_row(to_row(r)) << '\n';
}

std::vector<TrialRow> read_trials_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != kTrialCsvHeader) {
    throw std::invalid_argument("trial CSV: missing or unexpected header");
  }
  std::vector<TrialRow> rows;
  while (std::getline(is, line)) {
    if (!trim(line).empty()) rows.push_back(parse_row(trim(line)));
  }
  return rows;
}

// ---------------------------------------------------------------------------------------
// Sweeps

void SweepGrid::validate() const {
  if (n < 1) throw std::invalid_argument("sweep: n must be >= 1");
  if (ratios.empty() || deltas.empty() || anchor_errs.empty() || kappas.empty()) {
    throw std::invalid_argument("sweep: every grid list must be non-empty");
  }
  if (trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
  for (double r : ratios) {
    if (!(r > 0.0) || std::llround(r * static_cast<double>(n)) < 1) {
      throw std::invalid_argument("sweep: m/n ratios must give m >= 1");
    }
  }
  for (const auto& cell : cells()) cell.validate();
}

std::vector<TrialConfig> SweepGrid::cells() const {
  std::vector<TrialConfig> out;
  for (double ratio : ratios) {
    for (double delta : deltas) {
      for (double err : anchor_errs) {
        for (double kappa : kappas) {
          TrialConfig c;
          c.n = n;
          c.m = static_cast<Index>(std::llround(ratio * static_cast<double>(n)));
          c.corruption = {delta, model, magnitude_scale};
          c.anchor = anchor;
          c.anchor_err = err;
          c.truncation_factor = truncation_factor;
          c.rpm.lambda_mode = LambdaMode::AutoScaled;
          c.rpm.kappa = kappa;
          c.rpm.allow_kappa_below_seven = true;
          c.rpm.formulation = formulation;
          c.success_tol = success_tol;
          c.record_timing = record_timing;
          out.push_back(c);
        }
      }
    }
  }
  return out;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t cell, std::size_t trial) {
  return hash64(base_seed, cell, trial);
}

SweepResult run_sweep(const SweepGrid& grid) {
  grid.validate();
  const auto cells = grid.cells();
  const auto per_cell = static_cast<std::size_t>(grid.trials);

  SweepResult out;
  out.trials.resize(cells.size() * per_cell);
  parallel_for(out.trials.size(), [&](std::size_t k) {
    const std::size_t cell = k / per_cell;
    const std::size_t trial = k % per_cell;
    TrialConfig cfg = cells[cell];
    cfg.seed = trial_seed(grid.base_seed, cell, trial);
    out.trials[k] = run_trial(cfg);
  });

  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellSummary s;
    s.cell = cells[c];
    for (std::size_t t = 0; t < per_cell; ++t) {
      ++s.trials;
      s.successes += out.trials[c * per_cell + t].success ? 1 : 0;
    }
    out.cells.push_back(s);
  }
  return out;
}

void write_summary_csv(std::ostream& os, const std::vector<CellSummary>& cells) {
  os << kSummaryCsvHeader << '\n';
  for (const auto& s : cells) {
    const TrialConfig& c = s.cell;
    os << c.n << ',' << c.m << ','
       << format_double(static_cast<double>(c.m) / static_cast<double>(c.n)) << ','
       << format_double(c.corruption.fraction) << ',' << to_string(c.corruption.model) << ','
       << to_string(c.anchor) << ','
       << format_double(c.anchor == AnchorMode::Oracle ? c.anchor_err : c.truncation_factor)
       << ',' << to_string(c.rpm.lambda_mode) << ',' << format_double(kappa_of(c.rpm)) << ','
       << to_string(c.rpm.formulation) << ',' << s.trials << ',' << s.successes << ','
       << format_double(s.success_rate()) << '\n';
  }
}

void set_sweep_option(SweepGrid& g, std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  try {
    if (key == "n") {
      g.n = parse_integer<Index>(v, "n");
    } else if (key == "ratios" || key == "m_over_n") {
      g.ratios = parse_list(v);
    } else if (key == "deltas") {
      g.deltas = parse_list(v);
    } else if (key == "anchor_errs") {
      g.anchor_errs = parse_list(v);
    } else if (key == "kappas") {
      g.kappas = parse_list(v);
    } else if (key == "trials") {
      g.trials = parse_integer<int>(v, "trials");
    } else if (key == "seed") {
      g.base_seed = parse_integer<std::uint64_t>(v, "seed");
    } else if (key == "model") {
      g.model = parse_corruption_model(v);
    } else if (key == "magnitude_scale") {
      g.magnitude_scale = parse_double(v);
    } else if (key == "anchor") {
      g.anchor = parse_anchor_mode(v);
    } else if (key == "truncation_factor") {
      g.truncation_factor = parse_double(v);
    } else if (key == "formulation") {
      g.formulation = parse_formulation(v);
    } else if (key == "success_tol") {
      g.success_tol = parse_double(v);
    } else if (key == "timing") {
      g.record_timing = parse_bool(v);
    } else {
      throw std::invalid_argument("unknown key");
    }
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("sweep option '" + std::string(key) + "': " + e.what());
  }
}

SweepGrid parse_sweep_config(std::istream& is) {
  SweepGrid g;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    set_sweep_option(g, trim(std::string_view(line).substr(0, eq)),
                     std::string_view(line).substr(eq + 1));
  }
  return g;
}

}  // namespace rpm
