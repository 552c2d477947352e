#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rpm/lp.hpp"

namespace rpm {
namespace {

// Calls visit(subset) for every k-subset of {0..n-1} in lexicographic order.
template <typename Visit>
void for_each_subset(Index n, Index k, Visit&& visit) {
  std::vector<Index> idx(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  if (k > n) return;
  for (;;) {
    visit(idx);
    Index pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) return;
    ++idx[static_cast<std::size_t>(pos)];
    for (Index i = pos + 1; i < k; ++i) {
      idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
}

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& M, const std::vector<Index>& rows) {
  Eigen::MatrixXd out(static_cast<Index>(rows.size()), M.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = M.row(rows[i]);
  return out;
}

}  // namespace

LPSolution brute_force_lp(const LPProblem& p, double tol) {
  p.validate();
  const Index d = p.num_variables();
  const Index r = p.num_constraints();
  const Index nb = p.num_finite_bounds();
  if (d > 8 || r + nb > 16) {
    throw std::invalid_argument("brute_force_lp: limited to d <= 8 and r + bounds <= 16");
  }

  // Every constraint as a row of  A z <= beta, bounds included.
  const Index total = r + nb;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(total, d);
  Vector beta(total);
  if (r > 0) {
    A.topRows(r) = p.constraints;
    beta.head(r) = p.rhs;
  }
  Index row = r;
  for (Index j = 0; j < d; ++j) {
    if (!std::isfinite(p.lower_bounds[j])) continue;
    A(row, j) = -1.0;
    beta[row] = -p.lower_bounds[j];
    ++row;
  }

  // Split R^d into the row space of A (where the polyhedron is pointed) and its
  // orthogonal complement, the lineality space.
  Index rank = 0;
  Eigen::MatrixXd V = Eigen::MatrixXd::Identity(d, d);
  if (total > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    const double cutoff = 1e-10 * std::max(1.0, sv.size() ? sv[0] : 0.0);
    for (Index i = 0; i < sv.size(); ++i) rank += sv[i] > cutoff ? 1 : 0;
    V = svd.matrixV();
  }
  const Eigen::MatrixXd basis = V.leftCols(rank);
  const Eigen::MatrixXd lineality = V.rightCols(d - rank);
  const Vector& c = p.objective;
  const bool along_line =
      d - rank > 0 && (lineality.transpose() * c).norm() > tol * std::max(1.0, c.norm());

  const Eigen::MatrixXd Ar = A * basis;
  const Vector cr = basis.transpose() * c;

  auto feasible = [&](const Vector& w) {
    const Vector lhs = Ar * w;
    for (Index i = 0; i < total; ++i) {
      if (lhs[i] > beta[i] + tol * (1.0 + std::abs(beta[i]))) return false;
    }
    return true;
  };

  LPSolution out;
  out.iterations = 0;
  bool any_vertex = false;
  double best = -std::numeric_limits<double>::infinity();
  Vector best_w = Vector::Zero(rank);

  if (rank == 0) {
    any_vertex = feasible(best_w);
    best = 0.0;
  } else {
    for_each_subset(total, rank, [&](const std::vector<Index>& subset) {
      ++out.iterations;
      const Eigen::MatrixXd S = gather_rows(Ar, subset);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
      lu.setThreshold(1e-10);
      if (lu.rank() < rank) return;
      Vector rhs(rank);
      for (Index i = 0; i < rank; ++i) rhs[i] = beta[subset[static_cast<std::size_t>(i)]];
      const Vector w = lu.solve(rhs);
      if (!w.allFinite() || !feasible(w)) return;
      const double value = cr.dot(w);
      if (!any_vertex || value > best) {
        best = value;
        best_w = w;
      }
      any_vertex = true;
    });
  }

  if (!any_vertex) {
    out.status = LPStatus::Infeasible;
    out.objective_value = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  // Extreme rays of the pointed recession cone {w : Ar w <= 0} lie on the 1-D kernels of
  // (rank-1)-row subsets.
  bool improving_ray = false;
  if (rank > 0) {
    const double ray_tol = tol * std::max(1.0, cr.norm());
    auto check_direction = [&](const Vector& dir) {
      for (const double sign : {1.0, -1.0}) {
        const Vector w = sign * dir;
        if (cr.dot(w) <= ray_tol) continue;
        const Vector lhs = Ar * w;
        bool recedes = true;
        for (Index i = 0; i < total && recedes; ++i) {
          recedes = lhs[i] <= tol * std::max(1.0, Ar.row(i).norm());
        }
        if (recedes) improving_ray = true;
      }
    };
    if (rank == 1) {
      check_direction(Vector::Ones(1));
    } else {
      for_each_subset(total, rank - 1, [&](const std::vector<Index>& subset) {
        if (improving_ray) return;
        const Eigen::MatrixXd S = gather_rows(Ar, subset);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
        lu.setThreshold(1e-10);
        if (lu.rank() != rank - 1) return;
        const Eigen::MatrixXd K = lu.kernel();
        if (K.cols() != 1) return;
        check_direction(K.col(0).normalized());
      });
    }
  }

  if (along_line || improving_ray) {
    out.status = LPStatus::Unbounded;
    out.objective_value = std::numeric_limits<double>::infinity();
    return out;
  }
  out.status = LPStatus::Optimal;
  out.z = basis * best_w;
  if (rank == 0) out.z = Vector::Zero(d);
  out.objective_value = c.dot(out.z);
  return out;
}

}  // namespace rpm
