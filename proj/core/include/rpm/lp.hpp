#pragma once

#include <iosfwd>
#include <limits>
#include <string_view>

#include "rpm/types.hpp"

namespace rpm {

inline constexpr double kNoLowerBound = -std::numeric_limits<double>::infinity();

/// maximize c.z  subject to  G z <= h,  z_j >= lower_bounds_j.
/// A lower bound of -inf marks a free variable.
struct LPProblem {
  Vector objective;
  Matrix constraints;
  Vector rhs;
  Vector lower_bounds;

  Index num_variables() const { return objective.size(); }
  Index num_constraints() const { return constraints.rows(); }
  Index num_finite_bounds() const;

  /// Throws std::invalid_argument on inconsistent sizes or non-finite data.
  void validate() const;

  /// Problem with d free variables and no constraints.
  static LPProblem unconstrained(Vector objective);
};

enum class LPStatus { Optimal, Infeasible, Unbounded, IterationLimit };

std::string_view to_string(LPStatus status);

enum class Pricing {
  SteepestEdge,  ///< exact weights read off the dense tableau
  Dantzig,       ///< most negative reduced cost
};

struct LPOptions {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  double pivot_tol = 1e-10;
  long max_iters = 200000;
  Pricing pricing = Pricing::SteepestEdge;
};

struct LPSolution {
  LPStatus status = LPStatus::IterationLimit;
  Vector z;  ///< meaningful only when Optimal
  double objective_value = 0.0;
  long iterations = 0;
};

/// Two-phase dense primal simplex. Uses the configured pricing rule, switches to Bland's
/// rule after 2(r + d) consecutive non-improving pivots and back after the next improving one.
LPSolution solve_lp(const LPProblem& p, const LPOptions& opts = {});

/// Vertex-enumeration oracle for tiny problems (d <= 8, r + finite bounds <= 16).
/// Handles problems whose polyhedron contains a line by restricting to the row space.
LPSolution brute_force_lp(const LPProblem& p, double tol = 1e-9);

/// G z <= h + tol and z >= lower - tol.
bool check_feasible(const LPProblem& p, const Vector& z, double tol);

/// Plain-text dump used by `rpm solve --lp-dump`; see README for the format.
void write_lp(std::ostream& os, const LPProblem& p);
LPProblem read_lp(std::istream& is);

}  // namespace rpm
