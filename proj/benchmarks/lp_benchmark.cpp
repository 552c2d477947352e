#include <benchmark/benchmark.h>

#include <random>

#include "rpm/anchor.hpp"
#include "rpm/experiment.hpp"
#include "rpm/lp.hpp"
#include "rpm/measurements.hpp"
#include "rpm/robust_phasemax.hpp"

namespace {

using namespace rpm;

TrialInstance instance(Index n, Index m, std::uint64_t seed) {
  TrialConfig c;
  c.n = n;
  c.m = m;
  c.corruption = {0.05, CorruptionModel::ShrinkToZero, 1.0};
  c.seed = seed;
  return make_trial_instance(c);
}

// Full RPM solve at n = 20, m = range(0).
void BM_SolveRpm(benchmark::State& state) {
  const TrialInstance in = instance(20, state.range(0), 7);
  RPMConfig cfg;
  long iters = 0;
  for (auto _ : state) {
    const auto r = solve_rpm(in.measurements.sensing, in.measurements.b, in.phi, cfg);
    iters = r.iterations;
    benchmark::DoNotOptimize(r.x_hat.data());
  }
  state.counters["pivots"] = static_cast<double>(iters);
}
BENCHMARK(BM_SolveRpm)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_Pricing(benchmark::State& state) {
  const Index m = state.range(1);
  const TrialInstance in = instance(20, m, 11);
  const LPProblem p = build_rpm(in.measurements.sensing, in.measurements.b, in.phi,
                                7.0 * norm_estimate(in.measurements.b) / static_cast<double>(m));
  LPOptions opts;
  opts.pricing = state.range(0) == 0 ? Pricing::SteepestEdge : Pricing::Dantzig;
  long iters = 0;
  for (auto _ : state) {
    const auto s = solve_lp(p, opts);
    iters = s.iterations;
    benchmark::DoNotOptimize(s.z.data());
  }
  state.SetLabel(state.range(0) == 0 ? "steepest-edge" : "dantzig");
  state.counters["pivots"] = static_cast<double>(iters);
}
BENCHMARK(BM_Pricing)->ArgsProduct({{0, 1}, {200, 400}})->Unit(benchmark::kMillisecond);

// Simplex against vertex enumeration on the largest problem the oracle accepts.
LPProblem tiny_box_lp() {
  Engine rng(3);
  std::normal_distribution<double> g;
  LPProblem p;
  p.objective = Vector::NullaryExpr(6, [&](Index) { return g(rng); });
  p.constraints = Matrix::NullaryExpr(10, 6, [&](Index, Index) { return g(rng); });
  p.rhs = Vector::Ones(10) * 2.0;
  p.lower_bounds = Vector::Constant(6, -1.0);
  return p;
}

void BM_SimplexTiny(benchmark::State& state) {
  const LPProblem p = tiny_box_lp();
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(p).objective_value);
}
BENCHMARK(BM_SimplexTiny);

void BM_BruteForceTiny(benchmark::State& state) {
  const LPProblem p = tiny_box_lp();
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_lp(p).objective_value);
}
BENCHMARK(BM_BruteForceTiny)->Unit(benchmark::kMillisecond);

void BM_Trial(benchmark::State& state) {
  TrialConfig c;
  c.corruption = {0.05, CorruptionModel::ShrinkToZero, 1.0};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    c.seed = ++seed;
    benchmark::DoNotOptimize(run_trial(c).rel_err_signed);
  }
}
BENCHMARK(BM_Trial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
