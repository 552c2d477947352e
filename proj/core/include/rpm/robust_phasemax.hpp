#pragma once

#include <optional>
#include <string_view>
#include <utility>

#include "rpm/lp.hpp"
#include "rpm/types.hpp"

namespace rpm {

enum class Formulation {
  NonnegSlack,    ///< slacks e >= 0 penalized by lambda * sum(e)
  L1Split,        ///< free slacks penalized by lambda * ||e||_1, split as e = p - q
  PlainPhaseMax,  ///< no slacks: |<a_i, x>| <= b_i
};

enum class LambdaMode {
  Explicit,    ///< use RPMConfig::lambda as given
  AutoSeven,   ///< lambda = 7 * norm_estimate(b) / m
  AutoScaled,  ///< lambda = kappa * norm_estimate(b) / m
};

std::string_view to_string(Formulation f);
std::string_view to_string(LambdaMode mode);
Formulation parse_formulation(std::string_view name);
LambdaMode parse_lambda_mode(std::string_view name);

struct RPMConfig {
  double lambda = 0.0;  ///< Explicit mode only
  double kappa = 7.0;   ///< AutoScaled multiplier
  LambdaMode lambda_mode = LambdaMode::AutoSeven;
  Formulation formulation = Formulation::NonnegSlack;
  /// AutoScaled normally requires kappa >= 7, the lower end of the range where exact
  /// recovery is guaranteed. Sweeps that probe below it set this flag.
  bool allow_kappa_below_seven = false;

  void validate() const;
};

/// Penalty weight for measurements b under `config`.
double resolve_lambda(const RPMConfig& config, const Vector& b);

/// maximize <phi, x> - lambda <1, e>
/// s.t.  <a_i, x> - e_i <= b_i,  -<a_i, x> - e_i <= b_i,  e >= 0.
/// Variables are ordered (x, e); x is free.
LPProblem build_rpm(const SensingMatrix& A, const Vector& b, const Signal& phi, double lambda);

/// Same program with unconstrained slacks under an l1 penalty, linearized as e = p - q with
/// p, q >= 0. Variables are ordered (x, p, q).
LPProblem build_rpm_l1(const SensingMatrix& A, const Vector& b, const Signal& phi, double lambda);

/// Original PhaseMax: maximize <phi, x> s.t. |<a_i, x>| <= b_i.
LPProblem build_phasemax(const SensingMatrix& A, const Vector& b, const Signal& phi);

struct GroundTruth {
  Signal x0;
  Vector eta;
  bool sign_invariant = false;  ///< score with min over +-x0 (spectral anchors)
  double success_tol = 1e-6;
};

struct RecoveryReport {
  Signal x_hat;
  Vector e_hat;
  double lambda = 0.0;
  double objective_value = 0.0;
  LPStatus status = LPStatus::IterationLimit;
  long iterations = 0;
  double runtime_ms = 0.0;

  // Filled by score_recovery when ground truth is known.
  std::optional<double> rel_err_signed;
  std::optional<double> rel_err_sym;
  std::optional<double> slack_residual;
  std::optional<bool> success;
};

/// Builds the selected formulation from (A, b, phi, lambda) alone and solves it.
/// e_hat is zero for PlainPhaseMax and p - q for L1Split.
RecoveryReport solve_rpm(const SensingMatrix& A, const Vector& b, const Signal& phi,
                         const RPMConfig& config, const LPOptions& opts = {});

void score_recovery(RecoveryReport& report, const GroundTruth& truth);

/// max_i |e_hat_i - max(-eta_i, 0)|
double slack_check(const Vector& e_hat, const Vector& eta);

/// |<a_i, x0>| <= b_i + max(-eta_i, 0) for every i.
bool verify_feasibility_of_truth(const SensingMatrix& A, const Vector& b, const Signal& x0,
                                 const Vector& eta, double tol = 1e-12);

/// (||x_hat - x0|| / ||x0||, min(||x_hat - x0||, ||x_hat + x0||) / ||x0||)
std::pair<double, double> recovery_metrics(const Signal& x_hat, const Signal& x0);

/// The point (x0, -eta^-) in the variable layout of build_rpm.
Vector rpm_truth_point(const Signal& x0, const Vector& eta);

}  // namespace rpm
