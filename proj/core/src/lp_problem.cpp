#include "rpm/lp.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rpm/csv_io.hpp"

namespace rpm {

std::string_view to_string(LPStatus status) {
  switch (status) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
    case LPStatus::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

Index LPProblem::num_finite_bounds() const {
  Index count = 0;
  for (Index j = 0; j < lower_bounds.size(); ++j) count += std::isfinite(lower_bounds[j]) ? 1 : 0;
  return count;
}

void LPProblem::validate() const {
  const Index d = objective.size();
  if (d < 1) throw std::invalid_argument("LPProblem: needs at least one variable");
  if (constraints.cols() != d && constraints.rows() > 0) {
    throw std::invalid_argument("LPProblem: constraint matrix has wrong column count");
  }
  if (rhs.size() != constraints.rows()) {
    throw std::invalid_argument("LPProblem: rhs length differs from constraint count");
  }
  if (lower_bounds.size() != d) {
    throw std::invalid_argument("LPProblem: lower_bounds length differs from variable count");
  }
  if (!objective.allFinite() || !constraints.allFinite() || !rhs.allFinite()) {
    throw std::invalid_argument("LPProblem: non-finite data");
  }
  for (Index j = 0; j < d; ++j) {
    const double l = lower_bounds[j];
    if (std::isnan(l) || l == std::numeric_limits<double>::infinity()) {
      throw std::invalid_argument("LPProblem: lower bound must be finite or -inf");
    }
  }
}

LPProblem LPProblem::unconstrained(Vector objective) {
  LPProblem p;
  const Index d = objective.size();
  p.objective = std::move(objective);
  p.constraints = Matrix(0, d);
  p.rhs = Vector(0);
  p.lower_bounds = Vector::Constant(d, kNoLowerBound);
  return p;
}

bool check_feasible(const LPProblem& p, const Vector& z, double tol) {
  if (z.size() != p.num_variables()) {
    throw std::invalid_argument("check_feasible: point has wrong dimension");
  }
  if (!z.allFinite()) return false;
  for (Index j = 0; j < z.size(); ++j) {
    if (z[j] < p.lower_bounds[j] - tol) return false;
  }
  if (p.num_constraints() == 0) return true;
  const Vector lhs = p.constraints * z;
  for (Index i = 0; i < lhs.size(); ++i) {
    if (lhs[i] > p.rhs[i] + tol) return false;
  }
  return true;
}

namespace {

void write_row(std::ostream& os, std::string_view head, const auto& values) {
  os << head;
  for (Index j = 0; j < values.size(); ++j) os << ' ' << format_double(values[j]);
}

std::vector<double> parse_numbers(std::istringstream& in) {
  std::vector<double> out;
  std::string token;
  while (in >> token) {
    if (token == "<=") continue;
    out.push_back(parse_double(token));
  }
  return out;
}

}  // namespace

void write_lp(std::ostream& os, const LPProblem& p) {
  os << "# rpm-lp d=" << p.num_variables() << " r=" << p.num_constraints() << '\n';
  write_row(os, "maximize", p.objective);
  os << '\n';
  write_row(os, "lower", p.lower_bounds);
  os << '\n';
  for (Index i = 0; i < p.num_constraints(); ++i) {
    write_row(os, "row", p.constraints.row(i));
    os << " <= " << format_double(p.rhs[i]) << '\n';
  }
}

LPProblem read_lp(std::istream& is) {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream in(line);
    std::string head;
    in >> head;
    if (head == "maximize") {
      objective = parse_numbers(in);
    } else if (head == "lower") {
      lower = parse_numbers(in);
    } else if (head == "row") {
      rows.push_back(parse_numbers(in));
    } else {
      throw std::runtime_error("read_lp: unexpected line '" + line + "'");
    }
  }
  const auto d = static_cast<Index>(objective.size());
  if (static_cast<Index>(lower.size()) != d && !lower.empty()) {
    throw std::runtime_error("read_lp: lower-bound line has the wrong length");
  }
  LPProblem p;
  p.objective = Eigen::Map<const Vector>(objective.data(), d);
  p.lower_bounds = lower.empty() ? Vector::Constant(d, kNoLowerBound)
                                 : Vector(Eigen::Map<const Vector>(lower.data(), d));
  p.constraints = Matrix(static_cast<Index>(rows.size()), d);
  p.rhs = Vector(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<Index>(rows[i].size()) != d + 1) {
      throw std::runtime_error("read_lp: constraint row " + std::to_string(i) +
                               " has the wrong number of entries");
    }
    const auto r = static_cast<Index>(i);
    for (Index j = 0; j < d; ++j) p.constraints(r, j) = rows[i][static_cast<std::size_t>(j)];
    p.rhs[r] = rows[i].back();
  }
  p.validate();
  return p;
}

}  // namespace rpm
