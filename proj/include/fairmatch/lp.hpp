#pragma once

#include <span>
#include <vector>

#include "fairmatch/instance.hpp"
#include "fairmatch/simplex.hpp"

namespace fairmatch {

// Column f of either LP is the expected number of probes x_f on edge f.
// The fairness LP appends one column, eta, at index num_edges().
//
// Shared constraints, one row each:
//   sum_{f in E_u} p_f x_f <= 1        (unit capacity, per driver)
//   sum_{f in E_u} x_f     <= quota_u  (probe budget, per driver)
//   sum_{f in E_v} x_f     <= r_v      (arrivals, per request type)
LpProblem build_profit_lp(const Instance& inst);

// maximize eta s.t. eta - sum_{f in E_v} (p_f / r_v) x_f <= 0 for every v,
// plus the shared rows.
LpProblem build_fairness_lp(const Instance& inst);

double evaluate_profit(const Instance& inst, std::span<const double> x);

// min_v sum_{f in E_v} x_f p_f / r_v. A request type without edges scores 0.
double evaluate_fairness(const Instance& inst, std::span<const double> x);

// Checks the shared rows and x >= 0 within `tol`.
ValidationReport check_feasibility(const Instance& inst, std::span<const double> x, double tol);

struct Benchmarks {
  std::vector<double> x_star;  // profit-LP optimum, per edge
  std::vector<double> y_star;  // fairness-LP optimum, per edge (eta dropped)
  double opt_p = 0.0;
  double opt_f = 0.0;
};

// Solves both LPs. Throws std::runtime_error if either is not optimal, which
// cannot happen on a valid instance (x = 0 is always feasible, and both
// objectives are bounded by the capacity rows).
Benchmarks solve_benchmarks(const Instance& inst);

}  // namespace fairmatch
