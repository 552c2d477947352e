#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rpm/experiment.hpp"
#include "rpm/heatmap.hpp"

using namespace rpm;
namespace fs = std::filesystem;

namespace {

TrialConfig acceptance_point(double delta, std::uint64_t seed) {
  TrialConfig c;
  c.n = 20;
  c.m = 400;
  c.corruption = {delta, CorruptionModel::ShrinkToZero, 1.0};
  c.anchor = AnchorMode::Oracle;
  c.anchor_err = 0.3;
  c.seed = seed;
  return c;
}

int count_lines(const std::string& text) {
  return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

int count_of(const std::string& text, const std::string& needle) {
  int n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rpm_test_" + name);
  fs::create_directories(dir);
  return dir;
}

double binomial_sd(double p, int trials) { return std::sqrt(p * (1 - p) / trials); }

}  // namespace

TEST(RunTrial, CleanAcceptancePoint) {
  const TrialResult r = run_trial(acceptance_point(0.0, 1));
  EXPECT_EQ(r.status, LPStatus::Optimal);
  EXPECT_TRUE(r.success);
  EXPECT_NEAR(r.anchor_error, 0.3, 1e-12);
}

TEST(RunTrial, CorruptedAcceptancePoint) {
  const TrialResult r = run_trial(acceptance_point(0.05, 1));
  EXPECT_TRUE(r.success);
  EXPECT_LE(r.rel_err_signed, 1e-6);
  EXPECT_LE(r.slack_residual, 1e-6);
  EXPECT_GT(r.lp_iterations, 0);
  EXPECT_EQ(r.runtime_ms, 0.0);
}

TEST(RunTrial, PlainPhaseMaxMostlyFails) {
  int failures = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    TrialConfig c = acceptance_point(0.05, seed);
    c.rpm.formulation = Formulation::PlainPhaseMax;
    failures += run_trial(c).success ? 0 : 1;
  }
  EXPECT_GE(failures, 9);
}

TEST(RunTrial, DeterministicAndTimingOptIn) {
  TrialConfig c = acceptance_point(0.05, 17);
  c.n = 8;
  c.m = 120;
  EXPECT_EQ(to_row(run_trial(c)), to_row(run_trial(c)));
  c.record_timing = true;
  EXPECT_GT(run_trial(c).runtime_ms, 0.0);
}

TEST(RunTrial, SpectralAnchorScoredSymmetrically) {
  TrialConfig c = acceptance_point(0.05, 3);
  c.anchor = AnchorMode::Spectral;
  const TrialResult r = run_trial(c);
  EXPECT_EQ(r.success, r.rel_err_sym <= c.success_tol);
  EXPECT_LE(r.rel_err_sym, r.rel_err_signed);
}

TEST(RunTrial, ConfigErrors) {
  TrialConfig c = acceptance_point(0.05, 1);
  c.anchor_err = 0.5;
  EXPECT_THROW(run_trial(c), std::invalid_argument);
  c = acceptance_point(1.0, 1);
  EXPECT_THROW(run_trial(c), std::invalid_argument);
  c = acceptance_point(0.05, 1);
  c.n = 0;
  EXPECT_THROW(run_trial(c), std::invalid_argument);
  c = acceptance_point(0.05, 1);
  c.anchor = AnchorMode::Spectral;
  c.m = 10;
  EXPECT_THROW(run_trial(c), std::invalid_argument);
  c = acceptance_point(0.05, 1);
  c.rpm.lambda_mode = LambdaMode::AutoScaled;
  c.rpm.kappa = 2;
  EXPECT_THROW(run_trial(c), std::invalid_argument);
  EXPECT_THROW(parse_anchor_mode("psychic"), std::invalid_argument);
}

TEST(Csv, HeaderAndRoundTrip) {
  std::vector<TrialResult> results;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    TrialConfig c = acceptance_point(0.1, seed);
    c.n = 5;
    c.m = 60;
    results.push_back(run_trial(c));
  }
  // an unbounded trial has NaN metrics
  TrialConfig low = acceptance_point(0.0, 9);
  low.n = 5;
  low.m = 60;
  low.rpm.lambda_mode = LambdaMode::Explicit;
  low.rpm.lambda = 1e-5;
  results.push_back(run_trial(low));
  ASSERT_EQ(results.back().status, LPStatus::Unbounded);

  std::stringstream ss;
  write_trials_csv(ss, results);
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), kTrialCsvHeader);
  EXPECT_EQ(count_lines(text), 6);

  const auto rows = read_trials_csv(ss);
  ASSERT_EQ(rows.size(), results.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i], to_row(results[i])) << i;
    EXPECT_EQ(format_row(rows[i]), format_row(parse_row(format_row(rows[i]))));
  }
  EXPECT_TRUE(std::isnan(rows.back().rel_err_signed));
  EXPECT_EQ(rows.back().status, "unbounded");
  EXPECT_EQ(rows.back().lambda_mode, "explicit");
  EXPECT_EQ(rows.back().kappa, 1e-5);
}

TEST(Csv, MalformedInput) {
  EXPECT_THROW(parse_row("1,2,3"), std::invalid_argument);
  EXPECT_THROW(parse_row("x,400,0.05,shrink,oracle,0.3,auto7,7,1,optimal,0,0,0,true,3,0"),
               std::invalid_argument);
  EXPECT_THROW(parse_row("20,400,0.05,shrink,oracle,0.3,auto7,7,1,optimal,0,0,0,maybe,3,0"),
               std::invalid_argument);
  std::stringstream bad("n,m\n1,2\n");
  EXPECT_THROW(read_trials_csv(bad), std::invalid_argument);
}

TEST(Sweep, SingleCellSingleTrial) {
  SweepGrid g;
  g.n = 5;
  g.ratios = {10};
  g.trials = 1;
  const SweepResult r = run_sweep(g);
  ASSERT_EQ(r.trials.size(), 1u);
  ASSERT_EQ(r.cells.size(), 1u);
  std::stringstream data, summary;
  write_trials_csv(data, r.trials);
  write_summary_csv(summary, r.cells);
  EXPECT_EQ(count_lines(data.str()), 2);
  EXPECT_EQ(count_lines(summary.str()), 2);
  EXPECT_EQ(summary.str().substr(0, summary.str().find('\n')), kSummaryCsvHeader);
  EXPECT_EQ(r.trials[0].config.seed, trial_seed(1, 0, 0));
}

TEST(Sweep, CellOrderAndSeeds) {
  SweepGrid g;
  g.n = 4;
  g.ratios = {10, 20};
  g.deltas = {0, 0.1};
  g.kappas = {7, 9};
  g.trials = 2;
  g.base_seed = 77;
  const auto cells = g.cells();
  ASSERT_EQ(cells.size(), 8u);
  EXPECT_EQ(cells[0].m, 40);
  EXPECT_EQ(cells[7].m, 80);
  EXPECT_EQ(cells[1].rpm.kappa, 9);
  EXPECT_EQ(cells[2].corruption.fraction, 0.1);
  const SweepResult r = run_sweep(g);
  ASSERT_EQ(r.trials.size(), 16u);
  for (std::size_t k = 0; k < r.trials.size(); ++k) {
    EXPECT_EQ(r.trials[k].config.seed, trial_seed(77, k / 2, k % 2));
    EXPECT_EQ(r.trials[k].config.m, cells[k / 2].m);
  }
  EXPECT_EQ(trial_seed(77, 1, 0), hash64(77, 1, 0));
  EXPECT_NE(trial_seed(77, 1, 0), trial_seed(77, 0, 1));
}

TEST(Sweep, ByteIdenticalOnRepeat) {
  SweepGrid g;
  g.n = 6;
  g.ratios = {10, 15};
  g.deltas = {0.05, 0.2};
  g.trials = 3;
  g.base_seed = 5;
  std::stringstream a, b;
  write_trials_csv(a, run_sweep(g).trials);
  write_trials_csv(b, run_sweep(g).trials);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, KappaSensitivity) {
  SweepGrid g;
  g.n = 20;
  g.ratios = {20};
  g.deltas = {0.05};
  g.kappas = {1, 7, 50};
  g.trials = 6;
  g.base_seed = 11;
  const SweepResult r = run_sweep(g);
  ASSERT_EQ(r.cells.size(), 3u);
  EXPECT_GE(r.cells[1].success_rate(), r.cells[0].success_rate());
  EXPECT_EQ(r.cells[0].successes, 0);  // below 7/m every trial is unbounded
  for (std::size_t t = 0; t < 6; ++t) EXPECT_EQ(r.trials[t].status, LPStatus::Unbounded);
}

TEST(Sweep, SuccessNonIncreasingInDelta) {
  SweepGrid g;
  g.n = 10;
  g.ratios = {20};
  g.deltas = {0, 0.05, 0.1, 0.2, 0.35};
  g.trials = 12;
  g.base_seed = 3;
  const SweepResult r = run_sweep(g);
  for (std::size_t i = 0; i + 1 < r.cells.size(); ++i) {
    for (std::size_t j = i + 1; j < r.cells.size(); ++j) {
      const double pi = r.cells[i].success_rate(), pj = r.cells[j].success_rate();
      const double noise = 2 * std::hypot(binomial_sd(pi, g.trials), binomial_sd(pj, g.trials));
      EXPECT_LE(pj, pi + noise + 1e-12) << "delta " << g.deltas[i] << " vs " << g.deltas[j];
    }
  }
  EXPECT_EQ(r.cells[0].success_rate(), 1.0);
}

TEST(Sweep, GridValidation) {
  SweepGrid g;
  g.n = 0;
  EXPECT_THROW(run_sweep(g), std::invalid_argument);
  g = SweepGrid{};
  g.deltas.clear();
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = SweepGrid{};
  g.trials = 0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = SweepGrid{};
  g.anchor_errs = {0.7};
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = SweepGrid{};
  g.ratios = {0.01};
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(SweepConfig, ParsesKeysAndComments) {
  std::stringstream in(
      "# grid\n"
      "n = 12\n"
      "ratios = 5, 10,20\n"
      "deltas=0.1   # trailing comment\n"
      "\n"
      "kappas = 1,7\n"
      "trials = 4\n"
      "seed = 18446744073709551615\n"
      "model = worst\n"
      "anchor = spectral\n"
      "truncation_factor = 2.5\n"
      "formulation = l1\n"
      "timing = true\n");
  const SweepGrid g = parse_sweep_config(in);
  EXPECT_EQ(g.n, 12);
  EXPECT_EQ(g.ratios, (std::vector<double>{5, 10, 20}));
  EXPECT_EQ(g.deltas, (std::vector<double>{0.1}));
  EXPECT_EQ(g.kappas, (std::vector<double>{1, 7}));
  EXPECT_EQ(g.trials, 4);
  EXPECT_EQ(g.base_seed, 18446744073709551615ULL);
  EXPECT_EQ(g.model, CorruptionModel::WorstSupport);
  EXPECT_EQ(g.anchor, AnchorMode::Spectral);
  EXPECT_EQ(g.truncation_factor, 2.5);
  EXPECT_EQ(g.formulation, Formulation::L1Split);
  EXPECT_TRUE(g.record_timing);
}

TEST(SweepConfig, Errors) {
  std::stringstream unknown("colour = blue\n");
  EXPECT_THROW(parse_sweep_config(unknown), std::invalid_argument);
  std::stringstream no_eq("n 12\n");
  EXPECT_THROW(parse_sweep_config(no_eq), std::invalid_argument);
  std::stringstream bad_num("deltas = 0.1, x\n");
  EXPECT_THROW(parse_sweep_config(bad_num), std::invalid_argument);
  std::stringstream empty_list("kappas = \n");
  EXPECT_THROW(parse_sweep_config(empty_list), std::invalid_argument);
  SweepGrid g;
  try {
    set_sweep_option(g, "trials", "many");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("trials"), std::string::npos);
  }
}

TEST(Heatmap, ThreeByThree) {
  const fs::path dir = scratch_dir("heat3");
  std::ofstream(dir / "s.csv") << kSummaryCsvHeader << "\n"
                               << [] {
                                    std::string rows;
                                    for (int r : {10, 20, 30})
                                      for (double d : {0.0, 0.1, 0.2})
                                        rows += "10," + std::to_string(r * 10) + "," + std::to_string(r) +
                                                "," + std::to_string(d) +
                                                ",shrink,oracle,0.3,scaled,7,nonneg,4,2,0.5\n";
                                    return rows;
                                  }();
  const auto info = emit_heatmap(dir / "s.csv", "m_over_n", "delta", dir / "h.svg");
  EXPECT_EQ(info.columns, 3u);
  EXPECT_EQ(info.rows, 3u);
  EXPECT_EQ(info.cells, 9u);
  const std::string svg = slurp(dir / "h.svg");
  EXPECT_EQ(count_of(svg, "class=\"cell\""), 9);
  EXPECT_NE(svg.find(">m_over_n</text>"), std::string::npos);
  EXPECT_NE(svg.find(">delta</text>"), std::string::npos);
}

TEST(Heatmap, SingleCellAndPooling) {
  const fs::path dir = scratch_dir("heat1");
  SweepGrid g;
  g.n = 4;
  g.ratios = {10};
  g.kappas = {7, 9};  // two summary rows pooled into one (m/n, delta) cell
  g.trials = 2;
  const SweepResult r = run_sweep(g);
  {
    std::ofstream out(dir / "s.csv");
    write_summary_csv(out, r.cells);
  }
  const auto info = emit_heatmap(dir / "s.csv", "m_over_n", "delta", dir / "h.svg");
  EXPECT_EQ(info.cells, 1u);
  EXPECT_EQ(count_of(slurp(dir / "h.svg"), "class=\"cell\""), 1);
}

TEST(Heatmap, MissingFieldIsNamed) {
  const fs::path dir = scratch_dir("heatbad");
  std::ofstream(dir / "s.csv") << kSummaryCsvHeader << "\n10,100,10,0,shrink,oracle,0.3,scaled,7,nonneg,1,1,1\n";
  try {
    emit_heatmap(dir / "s.csv", "m_over_n", "gamma", dir / "h.svg");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("gamma"), std::string::npos);
  }
  EXPECT_THROW(emit_heatmap(dir / "absent.csv", "m", "delta", dir / "h.svg"), std::runtime_error);
}
