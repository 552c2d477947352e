#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rpm/lp.hpp"

namespace rpm {
namespace {

// How an original variable z_j maps onto nonnegative standard-form columns.
struct VariableMap {
  Index plus = -1;   // column of y (or y+ for a free variable)
  Index minus = -1;  // column of y- for a free variable, -1 otherwise
  double shift = 0.0;
};

// Standard form: maximize c.y s.t. A y = b, y >= 0, b >= 0, with columns laid out as
// [structural | slack per row | artificial per negated row].
struct StandardForm {
  std::vector<VariableMap> vars;
  Index structural = 0;
  Index slacks = 0;
  Index artificials = 0;
  Matrix A;
  Vector b;
  Vector c;
  std::vector<Index> initial_basis;

  Index cols() const { return structural + slacks + artificials; }
  bool is_artificial(Index j) const { return j >= structural + slacks; }
};

StandardForm to_standard_form(const LPProblem& p) {
  StandardForm sf;
  const Index d = p.num_variables();
  const Index r = p.num_constraints();

  sf.vars.resize(static_cast<std::size_t>(d));
  for (Index j = 0; j < d; ++j) {
    auto& v = sf.vars[static_cast<std::size_t>(j)];
    v.plus = sf.structural++;
    if (std::isfinite(p.lower_bounds[j])) {
      v.shift = p.lower_bounds[j];
    } else {
      v.minus = sf.structural++;
    }
  }
  sf.slacks = r;

  Vector shifted_rhs = p.rhs;
  if (r > 0) {
    Vector shift(d);
    for (Index j = 0; j < d; ++j) shift[j] = sf.vars[static_cast<std::size_t>(j)].shift;
    shifted_rhs -= p.constraints * shift;
  }
  for (Index i = 0; i < r; ++i) sf.artificials += shifted_rhs[i] < 0.0 ? 1 : 0;

  sf.A = Matrix::Zero(r, sf.cols());
  sf.b = Vector(r);
  sf.c = Vector::Zero(sf.cols());
  for (Index j = 0; j < d; ++j) {
    const auto& v = sf.vars[static_cast<std::size_t>(j)];
    sf.c[v.plus] = p.objective[j];
    if (v.minus >= 0) sf.c[v.minus] = -p.objective[j];
  }

  Index next_artificial = sf.structural + sf.slacks;
  sf.initial_basis.resize(static_cast<std::size_t>(r));
  for (Index i = 0; i < r; ++i) {
    const double sign = shifted_rhs[i] < 0.0 ? -1.0 : 1.0;
    for (Index j = 0; j < d; ++j) {
      const auto& v = sf.vars[static_cast<std::size_t>(j)];
      const double g = sign * p.constraints(i, j);
      sf.A(i, v.plus) = g;
      if (v.minus >= 0) sf.A(i, v.minus) = -g;
    }
    sf.A(i, sf.structural + i) = sign;
    sf.b[i] = sign * shifted_rhs[i];
    if (sign < 0.0) {
      sf.A(i, next_artificial) = 1.0;
      sf.initial_basis[static_cast<std::size_t>(i)] = next_artificial++;
    } else {
      sf.initial_basis[static_cast<std::size_t>(i)] = sf.structural + i;
    }
  }
  return sf;
}

enum class PhaseOutcome { Optimal, Unbounded, IterationLimit };

// Dense tableau. Rows 0..r-1 are constraints, row r is the objective row holding reduced
// costs (negative entries improve); the last column is the right-hand side.
class Tableau {
 public:
  Tableau(const StandardForm& sf, const LPOptions& opts)
      : opts_(opts),
        original_vars_(static_cast<Index>(sf.vars.size())),
        rows_(sf.A.rows()),
        cols_(sf.cols()),
        T_(Matrix::Zero(rows_ + 1, cols_ + 1)),
        basis_(sf.initial_basis),
        active_(static_cast<std::size_t>(rows_), true),
        allowed_(static_cast<std::size_t>(cols_), true) {
    T_.topLeftCorner(rows_, cols_) = sf.A;
    T_.col(cols_).head(rows_) = sf.b;
  }

  long iterations() const { return iterations_; }
  const std::vector<Index>& basis() const { return basis_; }
  const std::vector<bool>& active_rows() const { return active_; }
  double rhs(Index i) const { return T_(i, cols_); }
  double objective_value() const { return T_(rows_, cols_); }

  // Loads `cost` (maximize cost.y) into the objective row and prices out the basis.
  void set_objective(const Vector& cost) {
    for (Index j = 0; j < cols_; ++j) T_(rows_, j) = -cost[j];
    T_(rows_, cols_) = 0.0;
    for (Index i = 0; i < rows_; ++i) {
      if (!active_[static_cast<std::size_t>(i)]) continue;
      const double cb = cost[basis_[static_cast<std::size_t>(i)]];
      if (cb != 0.0) T_.row(rows_) += cb * T_.row(i);
    }
  }

  void forbid_column(Index j) { allowed_[static_cast<std::size_t>(j)] = false; }

  PhaseOutcome run() {
    const long stall_limit = 2 * (rows_ + original_vars_);
    long stall = 0;
    bool bland = false;
    for (;;) {
      Index s = -1;
      if (bland) {
        s = entering_bland();
      } else if (opts_.pricing == Pricing::SteepestEdge) {
        s = entering_steepest();
      } else {
        s = entering_dantzig();
      }
      if (s < 0) return PhaseOutcome::Optimal;
      const Index r = leaving_row(s);
      if (r < 0) return PhaseOutcome::Unbounded;
      if (iterations_ >= opts_.max_iters) return PhaseOutcome::IterationLimit;

      const double before = objective_value();
      pivot(r, s);
      if (objective_value() > before + opts_.opt_tol * (1.0 + std::abs(before))) {
        stall = 0;
        bland = false;
      } else if (++stall >= stall_limit) {
        bland = true;
      }
    }
  }

  // After phase one: pivot basic artificials out, or retire their row when the row is
  // a linear combination of the others.
  void evict_artificials(const StandardForm& sf) {
    for (Index i = 0; i < rows_; ++i) {
      if (!active_[static_cast<std::size_t>(i)]) continue;
      if (!sf.is_artificial(basis_[static_cast<std::size_t>(i)])) continue;
      Index best = -1;
      double best_abs = opts_.pivot_tol;
      for (Index j = 0; j < sf.structural + sf.slacks; ++j) {
        const double a = std::abs(T_(i, j));
        if (a > best_abs) {
          best_abs = a;
          best = j;
        }
      }
      if (best >= 0) {
        pivot(i, best);
      } else {
        active_[static_cast<std::size_t>(i)] = false;
      }
    }
  }

 private:
  Index entering_dantzig() const {
    Index best = -1;
    double most_negative = -opts_.opt_tol;
    for (Index j = 0; j < cols_; ++j) {
      if (!allowed_[static_cast<std::size_t>(j)]) continue;
      const double d = T_(rows_, j);
      if (d < most_negative) {
        most_negative = d;
        best = j;
      }
    }
    return best;
  }

  // Largest d_j^2 / (1 + ||B^-1 a_j||^2); the tableau holds B^-1 a_j explicitly.
  Index entering_steepest() {
    weights_.setOnes(cols_ + 1);
    for (Index i = 0; i < rows_; ++i) {
      if (active_[static_cast<std::size_t>(i)]) weights_ += T_.row(i).transpose().array().square().matrix();
    }
    Index best = -1;
    double best_score = 0.0;
    for (Index j = 0; j < cols_; ++j) {
      if (!allowed_[static_cast<std::size_t>(j)]) continue;
      const double d = T_(rows_, j);
      if (d >= -opts_.opt_tol) continue;
      const double score = d * d / weights_[j];
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  Index entering_bland() const {
    for (Index j = 0; j < cols_; ++j) {
      if (allowed_[static_cast<std::size_t>(j)] && T_(rows_, j) < -opts_.opt_tol) return j;
    }
    return -1;
  }

  // Minimum-ratio test; ties go to the lowest basic-variable index.
  Index leaving_row(Index s) const {
    Index best = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < rows_; ++i) {
      if (!active_[static_cast<std::size_t>(i)]) continue;
      const double a = T_(i, s);
      if (a <= opts_.pivot_tol) continue;
      const double ratio = std::max(0.0, T_(i, cols_)) / a;
      if (best < 0 || ratio < best_ratio - 1e-12 * (1.0 + best_ratio)) {
        best = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + 1e-12 * (1.0 + best_ratio) &&
                 basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(best)]) {
        best = i;
        best_ratio = std::min(best_ratio, ratio);
      }
    }
    return best;
  }

  void pivot(Index r, Index s) {
    ++iterations_;
    T_.row(r) /= T_(r, s);
    T_(r, s) = 1.0;
    for (Index i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      if (i < rows_ && !active_[static_cast<std::size_t>(i)]) continue;
      const double f = T_(i, s);
      if (f == 0.0) continue;
      T_.row(i) -= f * T_.row(r);
      T_(i, s) = 0.0;
    }
    basis_[static_cast<std::size_t>(r)] = s;
  }

  LPOptions opts_;
  Index original_vars_;
  Index rows_;
  Index cols_;
  Matrix T_;
  std::vector<Index> basis_;
  std::vector<bool> active_;
  std::vector<bool> allowed_;
  Vector weights_;
  long iterations_ = 0;
};

// Recomputes the basic solution from the original standard-form data so that roundoff
// accumulated over many pivots does not leak into the returned point.
Vector basic_solution(const StandardForm& sf, const Tableau& t) {
  const auto& basis = t.basis();
  const auto& active = t.active_rows();
  std::vector<Index> rows;
  for (Index i = 0; i < sf.A.rows(); ++i) {
    if (active[static_cast<std::size_t>(i)]) rows.push_back(i);
  }
  Vector y = Vector::Zero(sf.cols());
  const auto k = static_cast<Index>(rows.size());
  if (k == 0) return y;

  Eigen::MatrixXd B(k, k);
  Vector rhs(k);
  for (Index a = 0; a < k; ++a) {
    rhs[a] = sf.b[rows[static_cast<std::size_t>(a)]];
    for (Index col = 0; col < k; ++col) {
      B(a, col) = sf.A(rows[static_cast<std::size_t>(a)], basis[static_cast<std::size_t>(rows[static_cast<std::size_t>(col)])]);
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
  Vector yb = lu.solve(rhs);
  const bool usable = yb.allFinite() && (B * yb - rhs).norm() <= 1e-9 * (1.0 + rhs.norm());
  for (Index a = 0; a < k; ++a) {
    const Index row = rows[static_cast<std::size_t>(a)];
    const double value = usable ? yb[a] : t.rhs(row);
    y[basis[static_cast<std::size_t>(row)]] = std::max(0.0, value);
  }
  return y;
}

Vector recover_original(const StandardForm& sf, const Vector& y) {
  Vector z(static_cast<Index>(sf.vars.size()));
  for (Index j = 0; j < z.size(); ++j) {
    const auto& v = sf.vars[static_cast<std::size_t>(j)];
    z[j] = v.shift + y[v.plus] - (v.minus >= 0 ? y[v.minus] : 0.0);
  }
  return z;
}

LPSolution with_status(LPStatus status, long iterations) {
  LPSolution s;
  s.status = status;
  s.iterations = iterations;
  s.objective_value = std::numeric_limits<double>::quiet_NaN();
  return s;
}

}  // namespace

LPSolution solve_lp(const LPProblem& p, const LPOptions& opts) {
  p.validate();
  const StandardForm sf = to_standard_form(p);
  Tableau t(sf, opts);

  if (sf.artificials > 0) {
    Vector phase_one = Vector::Zero(sf.cols());
    for (Index j = sf.structural + sf.slacks; j < sf.cols(); ++j) phase_one[j] = -1.0;
    t.set_objective(phase_one);
    const PhaseOutcome outcome = t.run();
    if (outcome == PhaseOutcome::IterationLimit) {
      return with_status(LPStatus::IterationLimit, t.iterations());
    }
    // phase one is bounded above by zero, so Unbounded cannot occur here
    if (-t.objective_value() > opts.feas_tol) {
      return with_status(LPStatus::Infeasible, t.iterations());
    }
    t.evict_artificials(sf);
    for (Index j = sf.structural + sf.slacks; j < sf.cols(); ++j) t.forbid_column(j);
  }

  t.set_objective(sf.c);
  switch (t.run()) {
    case PhaseOutcome::Unbounded: return with_status(LPStatus::Unbounded, t.iterations());
    case PhaseOutcome::IterationLimit:
      return with_status(LPStatus::IterationLimit, t.iterations());
    case PhaseOutcome::Optimal: break;
  }

  LPSolution sol;
  sol.status = LPStatus::Optimal;
  sol.iterations = t.iterations();
  sol.z = recover_original(sf, basic_solution(sf, t));
  sol.objective_value = p.objective.dot(sol.z);
  return sol;
}

}  // namespace rpm
