#pragma once

#include "rpm/random.hpp"
#include "rpm/types.hpp"

namespace rpm {

/// phi = x0 + rel_err * ||x0|| * u with u uniform on the unit sphere, so
/// ||phi - x0|| = rel_err * ||x0||. rel_err must lie in [0, 0.5).
Signal oracle_anchor(const Signal& x0, double rel_err, Engine& rng);

/// Median-based estimate of ||x0|| from magnitude measurements: median(b) / q with
/// q = Phi^{-1}(0.75). Tolerates any corrupted fraction below one half.
double norm_estimate(const Vector& b);

/// Median of the entries (mean of the middle pair for even length).
double median(const Vector& values);

struct PowerIterationResult {
  Vector vector;            ///< unit-norm last iterate
  double eigenvalue = 0.0;  ///< Rayleigh quotient of `vector`
  double residual = 0.0;    ///< ||M v - lambda v||
  int iterations = 0;
  bool converged = false;
};

/// Dominant eigenpair of a symmetric matrix from a random start. Converged once
/// ||M v - lambda v|| <= tol * ||M||_F.
PowerIterationResult power_iteration(const Matrix& M, double tol, int max_iters, Engine& rng);

struct SpectralInitOptions {
  double truncation_factor = 3.0;
  double tol = 1e-8;
  int power_iters = 1000;
};

struct SpectralInitResult {
  Signal phi;  ///< +x0 or -x0 direction, scaled to norm_estimate(b)
  PowerIterationResult power;
};

/// Median-truncated spectral initializer. Builds
///   Y = (1/m) sum_i 1{b_i <= t * median(b)} b_i^2 a_i a_i^T
/// and returns its top eigenvector scaled to norm_estimate(b). The sign is arbitrary.
SpectralInitResult spectral_init(const SensingMatrix& A, const Vector& b,
                                 const SpectralInitOptions& opts, Engine& rng);

}  // namespace rpm
