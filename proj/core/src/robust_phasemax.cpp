#include "rpm/robust_phasemax.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rpm/anchor.hpp"

namespace rpm {

std::string_view to_string(Formulation f) {
  switch (f) {
    case Formulation::NonnegSlack: return "nonneg";
    case Formulation::L1Split: return "l1";
    case Formulation::PlainPhaseMax: return "plain";
  }
  return "unknown";
}

std::string_view to_string(LambdaMode mode) {
  switch (mode) {
    case LambdaMode::Explicit: return "explicit";
    case LambdaMode::AutoSeven: return "auto7";
    case LambdaMode::AutoScaled: return "scaled";
  }
  return "unknown";
}

Formulation parse_formulation(std::string_view name) {
  if (name == "nonneg" || name == "NonnegSlack") return Formulation::NonnegSlack;
  if (name == "l1" || name == "L1Split") return Formulation::L1Split;
  if (name == "plain" || name == "PlainPhaseMax") return Formulation::PlainPhaseMax;
  throw std::invalid_argument("unknown formulation '" + std::string(name) + "'");
}

LambdaMode parse_lambda_mode(std::string_view name) {
  if (name == "explicit" || name == "Explicit") return LambdaMode::Explicit;
  if (name == "auto7" || name == "AutoSeven") return LambdaMode::AutoSeven;
  if (name == "scaled" || name == "AutoScaled") return LambdaMode::AutoScaled;
  throw std::invalid_argument("unknown lambda mode '" + std::string(name) + "'");
}

void RPMConfig::validate() const {
  switch (lambda_mode) {
    case LambdaMode::Explicit:
      if (formulation != Formulation::PlainPhaseMax && !(lambda > 0.0 && std::isfinite(lambda))) {
        throw std::invalid_argument("explicit lambda must be positive");
      }
      break;
    case LambdaMode::AutoSeven: break;
    case LambdaMode::AutoScaled:
      if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw std::invalid_argument("lambda multiplier must be positive");
      }
      if (kappa < 7.0 && !allow_kappa_below_seven) {
        throw std::invalid_argument("scaled lambda mode requires a multiplier M >= 7");
      }
      break;
  }
}

double resolve_lambda(const RPMConfig& config, const Vector& b) {
  config.validate();
  const auto m = static_cast<double>(b.size());
  switch (config.lambda_mode) {
    case LambdaMode::Explicit: return config.lambda;
    case LambdaMode::AutoSeven: return 7.0 * norm_estimate(b) / m;
    case LambdaMode::AutoScaled: return config.kappa * norm_estimate(b) / m;
  }
  return config.lambda;
}

namespace {

void check_inputs(const SensingMatrix& A, const Vector& b, const Signal& phi) {
  if (A.rows() == 0) throw std::invalid_argument("RobustPhaseMax: empty measurement set");
  if (A.cols() == 0) throw std::invalid_argument("RobustPhaseMax: signal dimension is zero");
  if (b.size() != A.rows()) {
    throw std::invalid_argument("RobustPhaseMax: b has length " + std::to_string(b.size()) +
                                ", expected " + std::to_string(A.rows()));
  }
  if (phi.size() != A.cols()) {
    throw std::invalid_argument("RobustPhaseMax: anchor has length " + std::to_string(phi.size()) +
                                ", expected " + std::to_string(A.cols()));
  }
  if ((b.array() < 0.0).any()) throw std::invalid_argument("RobustPhaseMax: negative magnitude");
}

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("RobustPhaseMax: lambda must be positive");
  }
}

}  // namespace

LPProblem build_rpm(const SensingMatrix& A, const Vector& b, const Signal& phi, double lambda) {
  check_inputs(A, b, phi);
  check_lambda(lambda);
  const Index m = A.rows();
  const Index n = A.cols();

  LPProblem p;
  p.objective.resize(n + m);
  p.objective << phi, Vector::Constant(m, -lambda);
  p.lower_bounds.resize(n + m);
  p.lower_bounds << Vector::Constant(n, kNoLowerBound), Vector::Zero(m);

  p.constraints = Matrix::Zero(2 * m, n + m);
  p.rhs.resize(2 * m);
  for (Index i = 0; i < m; ++i) {
    p.constraints.row(2 * i).head(n) = A.row(i);
    p.constraints(2 * i, n + i) = -1.0;
    p.constraints.row(2 * i + 1).head(n) = -A.row(i);
    p.constraints(2 * i + 1, n + i) = -1.0;
    p.rhs[2 * i] = b[i];
    p.rhs[2 * i + 1] = b[i];
  }
  return p;
}

LPProblem build_rpm_l1(const SensingMatrix& A, const Vector& b, const Signal& phi,
                       double lambda) {
  check_inputs(A, b, phi);
  check_lambda(lambda);
  const Index m = A.rows();
  const Index n = A.cols();

  LPProblem p;
  p.objective.resize(n + 2 * m);
  p.objective << phi, Vector::Constant(2 * m, -lambda);
  p.lower_bounds.resize(n + 2 * m);
  p.lower_bounds << Vector::Constant(n, kNoLowerBound), Vector::Zero(2 * m);

  p.constraints = Matrix::Zero(2 * m, n + 2 * m);
  p.rhs.resize(2 * m);
  for (Index i = 0; i < m; ++i) {
    for (const Index r : {2 * i, 2 * i + 1}) {
      p.constraints.row(r).head(n) = (r == 2 * i) ? A.row(i) : Eigen::RowVectorXd(-A.row(i));
      p.constraints(r, n + i) = -1.0;     // p_i
      p.constraints(r, n + m + i) = 1.0;  // q_i
      p.rhs[r] = b[i];
    }
  }
  return p;
}

LPProblem build_phasemax(const SensingMatrix& A, const Vector& b, const Signal& phi) {
  check_inputs(A, b, phi);
  const Index m = A.rows();
  const Index n = A.cols();
  LPProblem p;
  p.objective = phi;
  p.lower_bounds = Vector::Constant(n, kNoLowerBound);
  p.constraints.resize(2 * m, n);
  p.rhs.resize(2 * m);
  for (Index i = 0; i < m; ++i) {
    p.constraints.row(2 * i) = A.row(i);
    p.constraints.row(2 * i + 1) = -A.row(i);
    p.rhs[2 * i] = b[i];
    p.rhs[2 * i + 1] = b[i];
  }
  return p;
}

RecoveryReport solve_rpm(const SensingMatrix& A, const Vector& b, const Signal& phi,
                         const RPMConfig& config, const LPOptions& opts) {
  check_inputs(A, b, phi);
  const Index m = A.rows();
  const Index n = A.cols();

  RecoveryReport report;
  report.lambda = config.formulation == Formulation::PlainPhaseMax
                      ? 0.0
                      : resolve_lambda(config, b);

  const LPProblem problem = [&] {
    switch (config.formulation) {
      case Formulation::NonnegSlack: return build_rpm(A, b, phi, report.lambda);
      case Formulation::L1Split: return build_rpm_l1(A, b, phi, report.lambda);
      case Formulation::PlainPhaseMax: return build_phasemax(A, b, phi);
    }
    throw std::logic_error("unhandled formulation");
  }();

  const auto start = std::chrono::steady_clock::now();
  const LPSolution sol = solve_lp(problem, opts);
  report.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  report.status = sol.status;
  report.iterations = sol.iterations;
  report.objective_value = sol.objective_value;
  if (sol.status != LPStatus::Optimal) {
    report.x_hat = Signal::Constant(n, std::numeric_limits<double>::quiet_NaN());
    report.e_hat = Vector::Constant(m, std::numeric_limits<double>::quiet_NaN());
    return report;
  }
  report.x_hat = sol.z.head(n);
  switch (config.formulation) {
    case Formulation::NonnegSlack: report.e_hat = sol.z.segment(n, m); break;
    case Formulation::L1Split: report.e_hat = sol.z.segment(n, m) - sol.z.segment(n + m, m); break;
    case Formulation::PlainPhaseMax: report.e_hat = Vector::Zero(m); break;
  }
  return report;
}

void score_recovery(RecoveryReport& report, const GroundTruth& truth) {
  if (report.status != LPStatus::Optimal) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    report.rel_err_signed = nan;
    report.rel_err_sym = nan;
    report.slack_residual = nan;
    report.success = false;
    return;
  }
  const auto [signed_err, sym_err] = recovery_metrics(report.x_hat, truth.x0);
  report.rel_err_signed = signed_err;
  report.rel_err_sym = sym_err;
  report.slack_residual = slack_check(report.e_hat, truth.eta);
  report.success = (truth.sign_invariant ? sym_err : signed_err) <= truth.success_tol;
}

double slack_check(const Vector& e_hat, const Vector& eta) {
  if (e_hat.size() != eta.size()) throw std::invalid_argument("slack_check: length mismatch");
  if (eta.size() == 0) return 0.0;
  return (e_hat - (-eta).cwiseMax(0.0)).cwiseAbs().maxCoeff();
}

bool verify_feasibility_of_truth(const SensingMatrix& A, const Vector& b, const Signal& x0,
                                 const Vector& eta, double tol) {
  if (b.size() != A.rows() || eta.size() != A.rows() || x0.size() != A.cols()) {
    throw std::invalid_argument("verify_feasibility_of_truth: dimension mismatch");
  }
  const Vector lhs = (A * x0).cwiseAbs();
  const Vector rhs = b + (-eta).cwiseMax(0.0);
  for (Index i = 0; i < lhs.size(); ++i) {
    if (lhs[i] > rhs[i] + tol * (1.0 + std::abs(rhs[i]))) return false;
  }
  return true;
}

std::pair<double, double> recovery_metrics(const Signal& x_hat, const Signal& x0) {
  if (x_hat.size() != x0.size()) throw std::invalid_argument("recovery_metrics: length mismatch");
  const double scale = x0.norm();
  if (scale == 0.0) throw std::invalid_argument("recovery_metrics: x0 is zero");
  const double plus = (x_hat - x0).norm() / scale;
  const double minus = (x_hat + x0).norm() / scale;
  return {plus, std::min(plus, minus)};
}

Vector rpm_truth_point(const Signal& x0, const Vector& eta) {
  Vector z(x0.size() + eta.size());
  z << x0, (-eta).cwiseMax(0.0);
  return z;
}

}  // namespace rpm
