#include "rpm/anchor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rpm/measurements.hpp"
#include "rpm/normal.hpp"

namespace rpm {

Signal oracle_anchor(const Signal& x0, double rel_err, Engine& rng) {
  if (!(rel_err >= 0.0) || rel_err >= 0.5) {
    throw std::invalid_argument("oracle_anchor: rel_err must lie in [0, 0.5)");
  }
  if (rel_err == 0.0) return x0;
  const Signal u = gen_signal(x0.size(), 1.0, rng);
  return x0 + (rel_err * x0.norm()) * u;
}

double median(const Vector& values) {
  if (values.size() == 0) throw std::invalid_argument("median of an empty vector");
  std::vector<double> v(values.data(), values.data() + values.size());
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double norm_estimate(const Vector& b) {
  if (b.size() == 0) throw std::invalid_argument("norm_estimate: empty measurement vector");
  if (b.cwiseAbs().maxCoeff() == 0.0) {
    throw std::invalid_argument("norm_estimate: all measurements are zero");
  }
  return median(b) / half_normal_median();
}

PowerIterationResult power_iteration(const Matrix& M, double tol, int max_iters, Engine& rng) {
  if (M.rows() != M.cols() || M.rows() == 0) {
    throw std::invalid_argument("power_iteration: matrix must be square and non-empty");
  }
  if (!M.allFinite()) throw std::invalid_argument("power_iteration: non-finite entries");

  const double scale = M.norm();
  PowerIterationResult out;
  out.vector = gen_signal(M.rows(), 1.0, rng);

  for (int it = 0;; ++it) {
    const Vector Mv = M * out.vector;
    out.eigenvalue = out.vector.dot(Mv);
    out.residual = (Mv - out.eigenvalue * out.vector).norm();
    out.iterations = it;
    if (out.residual <= tol * scale) {
      out.converged = true;
      return out;
    }
    if (it >= max_iters) return out;
    const double len = Mv.norm();
    if (len == 0.0) {
      // v sits in the null space; residual was already zero, so unreachable unless tol < 0
      return out;
    }
    out.vector = Mv / len;
  }
}

SpectralInitResult spectral_init(const SensingMatrix& A, const Vector& b,
                                 const SpectralInitOptions& opts, Engine& rng) {
  const Index m = A.rows();
  const Index n = A.cols();
  if (b.size() != m) throw std::invalid_argument("spectral_init: b length must equal rows of A");
  if (m < n) throw std::invalid_argument("spectral_init: requires m >= n");
  if (!(opts.truncation_factor > 0.0)) {
    throw std::invalid_argument("spectral_init: truncation_factor must be positive");
  }

  const double cutoff = opts.truncation_factor * median(b);
  Vector weights(m);
  for (Index i = 0; i < m; ++i) weights[i] = b[i] <= cutoff ? b[i] * b[i] : 0.0;

  Matrix Y = A.transpose() * weights.asDiagonal() * A;
  Y /= static_cast<double>(m);

  SpectralInitResult out;
  out.power = power_iteration(Y, opts.tol, opts.power_iters, rng);
  out.phi = out.power.vector * norm_estimate(b);
  return out;
}

}  // namespace rpm
