#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "rpm/random.hpp"
#include "rpm/types.hpp"

namespace rpm {

enum class CorruptionModel {
  ShrinkToZero,     ///< under-report: eta_i = -beta * b_clean_i, beta ~ U[0.5, 1]
  InflatePositive,  ///< over-report by a multiple of ||x0||
  MixedRandom,      ///< random sign, negative side clipped so that b_i >= 0
  WorstSupport,     ///< ShrinkToZero values on the largest clean measurements
};

std::string_view to_string(CorruptionModel model);
CorruptionModel parse_corruption_model(std::string_view name);

struct CorruptionSpec {
  double fraction = 0.0;  ///< delta in [0, 1)
  CorruptionModel model = CorruptionModel::ShrinkToZero;
  double magnitude_scale = 1.0;

  /// floor(fraction * m), the exact number of corrupted entries.
  Index corrupted_count(Index m) const;
  void validate() const;
};

struct Corruption {
  Vector b;
  Vector eta;
  std::vector<Index> support;  ///< sorted ascending
};

struct MeasurementSet {
  SensingMatrix sensing;
  Vector b_clean;
  Vector eta;
  Vector b;
  std::vector<Index> support;

  Index m() const { return sensing.rows(); }
  Index n() const { return sensing.cols(); }
};

/// Uniformly random direction scaled to Euclidean norm `norm`.
Signal gen_signal(Index n, double norm, Engine& rng);

/// m x n matrix of independent N(0, 1) entries, filled row by row.
SensingMatrix gen_sensing(Index m, Index n, Engine& rng);

/// |A x0| entrywise.
Vector clean_measurements(const SensingMatrix& A, const Signal& x0);

/// Corrupts exactly floor(delta m) entries of b_clean. Results are clipped so b >= 0,
/// and eta = b - b_clean is recorded after clipping, so b - eta reproduces b_clean up to
/// one rounding.
Corruption apply_corruption(const Vector& b_clean, const Signal& x0, const CorruptionSpec& spec,
                            Engine& rng);

/// Full pipeline for one master seed: sensing, clean magnitudes and corruption each draw
/// from their own stream.
MeasurementSet make_measurements(Index m, const Signal& x0, const CorruptionSpec& spec,
                                 std::uint64_t master_seed);

}  // namespace rpm
