#include "rpm/measurements.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rpm {

std::string_view to_string(CorruptionModel model) {
  switch (model) {
    case CorruptionModel::ShrinkToZero: return "shrink";
    case CorruptionModel::InflatePositive: return "inflate";
    case CorruptionModel::MixedRandom: return "mixed";
    case CorruptionModel::WorstSupport: return "worst";
  }
  return "unknown";
}

CorruptionModel parse_corruption_model(std::string_view name) {
  if (name == "shrink" || name == "ShrinkToZero") return CorruptionModel::ShrinkToZero;
  if (name == "inflate" || name == "InflatePositive") return CorruptionModel::InflatePositive;
  if (name == "mixed" || name == "MixedRandom") return CorruptionModel::MixedRandom;
  if (name == "worst" || name == "WorstSupport") return CorruptionModel::WorstSupport;
  throw std::invalid_argument("unknown corruption model '" + std::string(name) + "'");
}

Index CorruptionSpec::corrupted_count(Index m) const {
  // the small epsilon keeps products like 0.05 * 400 from landing on 19.999...
  return static_cast<Index>(std::floor(fraction * static_cast<double>(m) + 1e-9));
}

void CorruptionSpec::validate() const {
  if (!(fraction >= 0.0) || fraction >= 1.0) {
    throw std::invalid_argument("corruption fraction must lie in [0, 1)");
  }
  if (!(magnitude_scale > 0.0) || !std::isfinite(magnitude_scale)) {
    throw std::invalid_argument("corruption magnitude_scale must be positive");
  }
}

Signal gen_signal(Index n, double norm, Engine& rng) {
  if (n < 1) throw std::invalid_argument("gen_signal: n must be >= 1");
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("gen_signal: norm must be positive and finite");
  }
  std::normal_distribution<double> gauss;
  Signal x(n);
  double len = 0.0;
  while (len == 0.0) {
    for (Index i = 0; i < n; ++i) x[i] = gauss(rng);
    len = x.norm();
  }
  return x * (norm / len);
}

SensingMatrix gen_sensing(Index m, Index n, Engine& rng) {
  if (m < 1 || n < 1) throw std::invalid_argument("gen_sensing: dimensions must be >= 1");
  std::normal_distribution<double> gauss;
  SensingMatrix A(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) A(i, j) = gauss(rng);
  }
  return A;
}

Vector clean_measurements(const SensingMatrix& A, const Signal& x0) {
  if (A.cols() != x0.size()) {
    throw std::invalid_argument("clean_measurements: A has " + std::to_string(A.cols()) +
                                " columns but x0 has length " + std::to_string(x0.size()));
  }
  return (A * x0).cwiseAbs();
}

namespace {

std::vector<Index> random_support(Index m, Index k, Engine& rng) {
  std::vector<Index> all(static_cast<std::size_t>(m));
  std::iota(all.begin(), all.end(), Index{0});
  // partial Fisher-Yates; std::shuffle's draw pattern is not pinned down by the standard
  for (Index i = 0; i < k; ++i) {
    std::uniform_int_distribution<Index> pick(i, m - 1);
    std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(pick(rng))]);
  }
  all.resize(static_cast<std::size_t>(k));
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<Index> largest_support(const Vector& b_clean, Index k) {
  std::vector<Index> order(static_cast<std::size_t>(b_clean.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return b_clean[a] > b_clean[b]; });
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

Corruption apply_corruption(const Vector& b_clean, const Signal& x0, const CorruptionSpec& spec,
                            Engine& rng) {
  spec.validate();
  const Index m = b_clean.size();
  const Index k = spec.corrupted_count(m);
  const double scale = spec.magnitude_scale * x0.norm();

  Corruption out;
  out.support = spec.model == CorruptionModel::WorstSupport ? largest_support(b_clean, k)
                                                           : random_support(m, k, rng);
  out.b = b_clean;

  std::uniform_real_distribution<double> shrink(0.5, 1.0);
  std::uniform_real_distribution<double> inflate(1.0, 5.0);
  std::bernoulli_distribution coin(0.5);

  for (Index i : out.support) {
    double target = b_clean[i];
    switch (spec.model) {
      case CorruptionModel::ShrinkToZero:
      case CorruptionModel::WorstSupport:
        target = b_clean[i] * (1.0 - shrink(rng));
        break;
      case CorruptionModel::InflatePositive:
        target = b_clean[i] + scale * inflate(rng);
        break;
      case CorruptionModel::MixedRandom: {
        const bool up = coin(rng);
        const double amount = scale * inflate(rng);
        target = up ? b_clean[i] + amount : std::max(0.0, b_clean[i] - amount);
        break;
      }
    }
    out.b[i] = std::max(0.0, target);
  }
  out.eta = out.b - b_clean;
  return out;
}

MeasurementSet make_measurements(Index m, const Signal& x0, const CorruptionSpec& spec,
                                 std::uint64_t master_seed) {
  Engine sensing_rng = make_engine(master_seed, Stream::Sensing);
  Engine corruption_rng = make_engine(master_seed, Stream::Corruption);

  MeasurementSet ms;
  ms.sensing = gen_sensing(m, x0.size(), sensing_rng);
  ms.b_clean = clean_measurements(ms.sensing, x0);
  Corruption c = apply_corruption(ms.b_clean, x0, spec, corruption_rng);
  ms.b = std::move(c.b);
  ms.eta = std::move(c.eta);
  ms.support = std::move(c.support);
  return ms;
}

}  // namespace rpm
