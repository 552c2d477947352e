#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rpm/random.hpp"
#include "rpm/types.hpp"

namespace rpm {

/// Exact value of E[1{a1^2 + a2^2 <= 9} |a1 (a1 cos t + a2 sin t)|] for standard normal
/// (a1, a2):  ((2 - 11 e^{-9/2}) / pi) (|sin t| + asin(cos t) cos t),  t in [0, pi].
double closed_form_disc(double theta);

/// (2 - 11 e^{-9/2}) / pi, the minimum of closed_form_disc (attained at t = pi/2).
double disc_lower_constant();

struct ThetaEstimate {
  double box = 0.0;   ///< indicator |a1| <= 3
  double disc = 0.0;  ///< indicator a1^2 + a2^2 <= 9
  double box_stderr = 0.0;
  double disc_stderr = 0.0;
};

ThetaEstimate mc_expectation_theta(double theta, long samples, Engine& rng);

struct TruncatedMoments {
  double alpha = 0.0;  ///< E[z^2 1{|z| <= c}]
  double beta = 0.0;   ///< P(|z| <= c)
};

/// Closed form via beta = Phi(c) - Phi(-c), alpha = beta - 2 c phi(c).
TruncatedMoments truncated_moments(double cutoff = 3.0);

/// Plain Monte Carlo counterpart of truncated_moments.
TruncatedMoments mc_truncated_moments(long samples, Engine& rng, double cutoff = 3.0);

/// Spectral norm of (1/m) sum_i 1{|<a_i,x0>| <= 3||x0||} a_i a_i^T - I. For x0 = 0 the
/// indicator is taken as identically one.
double truncated_covariance_deviation(const SensingMatrix& A, const Signal& x0);

/// One deviation per trial; trial t draws its own Gaussian A from hash64(seed, t).
std::vector<double> mc_operator_norm(Index n, Index m, const Signal& x0, int trials,
                                     std::uint64_t seed);

/// (1/m) sum_i 1{|<a_i,x0>| <= 3||x0||} |<a_i,x0>| |<a_i,x1>|  /  (||x0|| ||x1||)
/// for every column x1 of `directions`.
Vector truncated_correlation(const SensingMatrix& A, const Signal& x0, const Matrix& directions);

/// Per trial, the minimum of truncated_correlation over `directions` random unit vectors
/// plus the n coordinate axes and x0 / ||x0||.
std::vector<double> mc_lower_bound(Index n, Index m, const Signal& x0, int directions, int trials,
                                   std::uint64_t seed);

/// ||A_S h||_1 / (delta m ||h||) where S holds the floor(delta m) rows with the largest
/// |<a_i, h>|. Zero for h = 0.
double l1_rowset_ratio(const SensingMatrix& A, const Vector& h, double delta);

/// sqrt(4 + 2 log(1/delta)) + 2
double rowset_constant(double delta);

/// Worst l1_rowset_ratio over trials, each with fresh A and h.
double mc_l1_rowset_bound(Index n, Index m, double delta, int trials, std::uint64_t seed);

struct LemmaCheck {
  std::string name;
  std::string relation;  ///< "<=" or ">="
  double observed = 0.0;
  double bound = 0.0;
  bool passed = false;
};

struct LemmaSuiteOptions {
  std::uint64_t seed = 20170601;
  long theta_samples = 1'000'000;
  int theta_grid = 32;
  Index n = 20;
  Index m_large = 100'000;
  int operator_trials = 20;
  int lower_bound_directions = 64;
  int lower_bound_trials = 10;
  Index rowset_n = 10;
  Index rowset_m = 2000;
  double rowset_delta = 0.05;
  int rowset_trials = 50;
};

/// Every numeric lemma constant checked at the configured sample sizes.
std::vector<LemmaCheck> run_lemma_suite(const LemmaSuiteOptions& opts = {});

}  // namespace rpm
