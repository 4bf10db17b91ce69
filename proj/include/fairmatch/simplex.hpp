#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace fairmatch {

enum class Relation { LessEq, Equal, GreaterEq };

struct LpConstraint {
  std::string name;
  std::vector<double> coeffs;
  Relation relation = Relation::LessEq;
  double bound = 0.0;
};

// maximize objective . x  subject to constraints, x >= 0.
struct LpProblem {
  std::string name;
  std::vector<double> objective;
  std::vector<LpConstraint> constraints;
  std::vector<std::string> variable_names;

  std::size_t num_variables() const { return objective.size(); }
  std::size_t num_constraints() const { return constraints.size(); }

  // Rows of the right width, finite data, one name per column.
  bool well_formed() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;
  double objective_value = 0.0;
  std::size_t iterations = 0;
};

inline constexpr double kPivotTolerance = 1e-9;
inline constexpr double kReportTolerance = 1e-7;

// Dense two-phase tableau simplex with Bland's rule. Returns a basic (vertex)
// optimum; fully deterministic for a given problem. Throws
// std::invalid_argument for malformed problems and std::runtime_error when the
// iteration limit trips.
LpSolution solve_lp(const LpProblem& prob);

// Largest violation of any constraint or nonnegativity bound by `x`.
double max_violation(const LpProblem& prob, const std::vector<double>& x);

// CPLEX LP text format; readable by glpsol, HiGHS, CBC and friends.
void write_lp_format(std::ostream& os, const LpProblem& prob);

}  // namespace fairmatch
