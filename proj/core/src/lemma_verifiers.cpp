#include "rpm/lemma_verifiers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "rpm/measurements.hpp"
#include "rpm/normal.hpp"
#include "rpm/parallel.hpp"

namespace rpm {

double disc_lower_constant() { return (2.0 - 11.0 * std::exp(-4.5)) / std::numbers::pi; }

double closed_form_disc(double theta) {
  const double c = std::cos(theta);
  return disc_lower_constant() * (std::abs(std::sin(theta)) + std::asin(std::clamp(c, -1.0, 1.0)) * c);
}

ThetaEstimate mc_expectation_theta(double theta, long samples, Engine& rng) {
  if (samples < 2) throw std::invalid_argument("mc_expectation_theta: need at least 2 samples");
  std::normal_distribution<double> gauss;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  double box_sum = 0.0, box_sq = 0.0, disc_sum = 0.0, disc_sq = 0.0;
  for (long k = 0; k < samples; ++k) {
    const double a1 = gauss(rng);
    const double a2 = gauss(rng);
    const double v = std::abs(a1 * (a1 * c + a2 * s));
    const double box = std::abs(a1) <= 3.0 ? v : 0.0;
    const double disc = a1 * a1 + a2 * a2 <= 9.0 ? v : 0.0;
    box_sum += box;
    box_sq += box * box;
    disc_sum += disc;
    disc_sq += disc * disc;
  }
  const auto N = static_cast<double>(samples);
  ThetaEstimate out;
  out.box = box_sum / N;
  out.disc = disc_sum / N;
  out.box_stderr = std::sqrt(std::max(0.0, box_sq / N - out.box * out.box) / (N - 1.0));
  out.disc_stderr = std::sqrt(std::max(0.0, disc_sq / N - out.disc * out.disc) / (N - 1.0));
  return out;
}

TruncatedMoments truncated_moments(double cutoff) {
  TruncatedMoments t;
  t.beta = normal_cdf(cutoff) - normal_cdf(-cutoff);
  t.alpha = t.beta - 2.0 * cutoff * normal_pdf(cutoff);
  return t;
}

TruncatedMoments mc_truncated_moments(long samples, Engine& rng, double cutoff) {
  std::normal_distribution<double> gauss;
  double inside = 0.0, second = 0.0;
  for (long k = 0; k < samples; ++k) {
    const double z = gauss(rng);
    if (std::abs(z) <= cutoff) {
      inside += 1.0;
      second += z * z;
    }
  }
  const auto N = static_cast<double>(samples);
  return {second / N, inside / N};
}

namespace {

Vector truncation_mask(const SensingMatrix& A, const Signal& x0) {
  const double norm = x0.norm();
  if (norm == 0.0) return Vector::Ones(A.rows());
  const Vector proj = A * x0;
  return (proj.array().abs() <= 3.0 * norm).cast<double>();
}

SensingMatrix trial_matrix(Index m, Index n, std::uint64_t seed, int trial) {
  Engine rng(hash64(seed, static_cast<std::uint64_t>(trial)));
  return gen_sensing(m, n, rng);
}

}  // namespace

double truncated_covariance_deviation(const SensingMatrix& A, const Signal& x0) {
  if (A.cols() != x0.size()) throw std::invalid_argument("dimension mismatch");
  const Vector mask = truncation_mask(A, x0);
  Eigen::MatrixXd C = A.transpose() * mask.asDiagonal() * A;
  C /= static_cast<double>(A.rows());
  C -= Eigen::MatrixXd::Identity(A.cols(), A.cols());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<double> mc_operator_norm(Index n, Index m, const Signal& x0, int trials,
                                     std::uint64_t seed) {
  if (m < n) throw std::invalid_argument("mc_operator_norm: requires m >= n");
  if (x0.size() != n) throw std::invalid_argument("mc_operator_norm: x0 has wrong length");
  std::vector<double> out(static_cast<std::size_t>(trials));
  parallel_for(out.size(), [&](std::size_t t) {
    out[t] = truncated_covariance_deviation(trial_matrix(m, n, seed, static_cast<int>(t)), x0);
  });
  return out;
}

Vector truncated_correlation(const SensingMatrix& A, const Signal& x0, const Matrix& directions) {
  const double norm = x0.norm();
  if (norm == 0.0) throw std::invalid_argument("truncated_correlation: x0 is zero");
  const Vector proj = A * x0;
  Vector weights(A.rows());
  for (Index i = 0; i < A.rows(); ++i) {
    weights[i] = std::abs(proj[i]) <= 3.0 * norm ? std::abs(proj[i]) : 0.0;
  }
  const Eigen::MatrixXd Ax1 = (A * directions).cwiseAbs();
  Vector out = Ax1.transpose() * weights;
  for (Index k = 0; k < out.size(); ++k) {
    out[k] /= static_cast<double>(A.rows()) * norm * directions.col(k).norm();
  }
  return out;
}

std::vector<double> mc_lower_bound(Index n, Index m, const Signal& x0, int directions, int trials,
                                   std::uint64_t seed) {
  if (m < n) throw std::invalid_argument("mc_lower_bound: requires m >= n");
  if (x0.size() != n) throw std::invalid_argument("mc_lower_bound: x0 has wrong length");
  std::vector<double> out(static_cast<std::size_t>(trials));
  parallel_for(out.size(), [&](std::size_t t) {
    const SensingMatrix A = trial_matrix(m, n, seed, static_cast<int>(t));
    Engine dir_rng(hash64(seed, static_cast<std::uint64_t>(t), 0xd1ec7ULL));
    Matrix X(n, directions + n + 1);
    for (int k = 0; k < directions; ++k) X.col(k) = gen_signal(n, 1.0, dir_rng);
    X.middleCols(directions, n).setIdentity();
    X.col(directions + n) = x0.normalized();
    out[t] = truncated_correlation(A, x0, X).minCoeff();
  });
  return out;
}

double rowset_constant(double delta) {
  if (!(delta > 0.0) || delta > 1.0) throw std::invalid_argument("rowset_constant: delta in (0, 1]");
  return std::sqrt(4.0 + 2.0 * std::log(1.0 / delta)) + 2.0;
}

double l1_rowset_ratio(const SensingMatrix& A, const Vector& h, double delta) {
  if (!(delta > 0.0) || delta > 1.0) throw std::invalid_argument("l1_rowset_ratio: delta in (0, 1]");
  const double hn = h.norm();
  if (hn == 0.0) return 0.0;
  const Index m = A.rows();
  const auto k = static_cast<Index>(std::floor(delta * static_cast<double>(m) + 1e-9));
  const Vector proj = (A * h).cwiseAbs();
  std::vector<double> v(proj.data(), proj.data() + m);
  std::nth_element(v.begin(), v.begin() + k, v.end(), std::greater<>());
  double sum = 0.0;
  for (Index i = 0; i < k; ++i) sum += v[static_cast<std::size_t>(i)];
  return sum / (delta * static_cast<double>(m) * hn);
}

double mc_l1_rowset_bound(Index n, Index m, double delta, int trials, std::uint64_t seed) {
  std::vector<double> ratios(static_cast<std::size_t>(trials));
  parallel_for(ratios.size(), [&](std::size_t t) {
    Engine rng(hash64(seed, static_cast<std::uint64_t>(t)));
    const SensingMatrix A = gen_sensing(m, n, rng);
    const Vector h = gen_signal(n, 1.0, rng);
    ratios[t] = l1_rowset_ratio(A, h, delta);
  });
  return ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
}

std::vector<LemmaCheck> run_lemma_suite(const LemmaSuiteOptions& opts) {
  std::vector<LemmaCheck> checks;
  auto at_most = [&](std::string name, double observed, double bound) {
    checks.push_back({std::move(name), "<=", observed, bound, observed <= bound});
  };
  auto at_least = [&](std::string name, double observed, double bound) {
    checks.push_back({std::move(name), ">=", observed, bound, observed >= bound});
  };

  const TruncatedMoments tm = truncated_moments();
  at_most("alpha = E[z^2 1{|z|<=3}], |alpha - 0.9707|", std::abs(tm.alpha - 0.9707), 5e-4);
  at_most("beta = P(|z|<=3), |beta - 0.9973|", std::abs(tm.beta - 0.9973), 5e-4);

  // theta grid on [0, pi], endpoints included
  const int grid = std::max(2, opts.theta_grid);
  std::vector<ThetaEstimate> est(static_cast<std::size_t>(grid));
  std::vector<double> thetas(static_cast<std::size_t>(grid));
  for (int g = 0; g < grid; ++g) thetas[static_cast<std::size_t>(g)] = std::numbers::pi * g / (grid - 1);
  parallel_for(est.size(), [&](std::size_t g) {
    Engine rng(hash64(opts.seed, 0x7e7aULL, g));
    est[g] = mc_expectation_theta(thetas[g], opts.theta_samples, rng);
  });
  double worst_gap = 0.0, min_disc = 1e300, worst_box_deficit = -1e300;
  for (std::size_t g = 0; g < est.size(); ++g) {
    worst_gap = std::max(worst_gap, std::abs(est[g].disc - closed_form_disc(thetas[g])));
    min_disc = std::min(min_disc, est[g].disc);
    worst_box_deficit = std::max(worst_box_deficit, est[g].disc - est[g].box);
  }
  at_most("disc expectation: max |MC - closed form| over theta grid", worst_gap, 0.01);
  at_least("disc expectation: min over theta grid", min_disc, 0.597 - 0.01);
  at_most("box >= disc: max (disc - box) over theta grid", worst_box_deficit, 0.01);
  at_least("closed form minimum (2 - 11e^{-9/2})/pi", disc_lower_constant(), 0.597);

  Engine x0_rng(hash64(opts.seed, 0x0c0ULL));
  const Signal x0 = gen_signal(opts.n, 1.0, x0_rng);

  const auto op = mc_operator_norm(opts.n, opts.m_large, x0, opts.operator_trials,
                                   hash64(opts.seed, 0x09e7ULL));
  at_most("truncated covariance ||(1/m) sum 1 a a^T - I|| (max over trials)",
          *std::max_element(op.begin(), op.end()), 0.04);

  const auto lb = mc_lower_bound(opts.n, opts.m_large, x0, opts.lower_bound_directions,
                                 opts.lower_bound_trials, hash64(opts.seed, 0x10bdULL));
  at_least("truncated correlation, min over directions and trials",
           *std::min_element(lb.begin(), lb.end()), 0.55);

  {
    Engine rng(hash64(opts.seed, 0xf1dULL));
    const SensingMatrix A = gen_sensing(opts.m_large, opts.n, rng);
    Engine dir_rng(hash64(opts.seed, 0xf1eULL));
    Matrix X(opts.n, 2);
    X.col(0) = x0 / x0.norm();
    X.col(1) = gen_signal(opts.n, 1.0, dir_rng);
    const Vector corr = truncated_correlation(A, x0, X);
    at_least("truncated correlation, fixed direction x1 = x0", corr[0], 0.59);
    at_least("truncated correlation, fixed random direction", corr[1], 0.59);
  }

  const double rowset = mc_l1_rowset_bound(opts.rowset_n, opts.rowset_m, opts.rowset_delta,
                                           opts.rowset_trials, hash64(opts.seed, 0x5e7ULL));
  at_most("adversarial row subset ||A_S h||_1 / (delta m ||h||)", rowset,
          rowset_constant(opts.rowset_delta));
  const double full = mc_l1_rowset_bound(opts.rowset_n, opts.rowset_m, 1.0, opts.rowset_trials,
                                         hash64(opts.seed, 0xa11ULL));
  at_most("all rows ||A h||_1 / (m ||h||)", full, 3.0);
  return checks;
}

}  // namespace rpm
