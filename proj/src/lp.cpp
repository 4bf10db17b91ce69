#include "fairmatch/lp.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fairmatch {

namespace {

void add_shared_rows(const Instance& inst, LpProblem& prob) {
  const std::size_t width = prob.num_variables();
  for (DriverIndex u = 0; u < inst.num_drivers(); ++u) {
    LpConstraint cap{"cap_" + std::to_string(u), std::vector<double>(width, 0.0),
                     Relation::LessEq, 1.0};
    LpConstraint quota{"quota_" + std::to_string(u), std::vector<double>(width, 0.0),
                       Relation::LessEq, static_cast<double>(inst.driver(u).quota)};
    for (EdgeId f : inst.edges_of_driver(u)) {
      cap.coeffs[f] = inst.edge(f).accept_prob;
      quota.coeffs[f] = 1.0;
    }
    prob.constraints.push_back(std::move(cap));
    prob.constraints.push_back(std::move(quota));
  }
  for (RequestIndex v = 0; v < inst.num_request_types(); ++v) {
    LpConstraint arrivals{"arr_" + std::to_string(v), std::vector<double>(width, 0.0),
                          Relation::LessEq, inst.request_type(v).rate};
    for (EdgeId f : inst.edges_of_request(v)) arrivals.coeffs[f] = 1.0;
    prob.constraints.push_back(std::move(arrivals));
  }
}

std::vector<std::string> edge_columns(const Instance& inst) {
  std::vector<std::string> names;
  names.reserve(inst.num_edges() + 1);
  for (EdgeId f = 0; f < inst.num_edges(); ++f) names.push_back("x_" + std::to_string(f));
  return names;
}

}  // namespace

LpProblem build_profit_lp(const Instance& inst) {
  LpProblem prob;
  prob.name = "profit";
  prob.variable_names = edge_columns(inst);
  prob.objective.resize(inst.num_edges());
  for (EdgeId f = 0; f < inst.num_edges(); ++f)
    prob.objective[f] = inst.edge(f).profit * inst.edge(f).accept_prob;
  add_shared_rows(inst, prob);
  return prob;
}

LpProblem build_fairness_lp(const Instance& inst) {
  const std::size_t eta = inst.num_edges();
  LpProblem prob;
  prob.name = "fairness";
  prob.variable_names = edge_columns(inst);
  prob.variable_names.push_back("eta");
  prob.objective.assign(eta + 1, 0.0);
  prob.objective[eta] = 1.0;
  for (RequestIndex v = 0; v < inst.num_request_types(); ++v) {
    LpConstraint row{"fair_" + std::to_string(v), std::vector<double>(eta + 1, 0.0),
                     Relation::LessEq, 0.0};
    row.coeffs[eta] = 1.0;
    const double rate = inst.request_type(v).rate;
    for (EdgeId f : inst.edges_of_request(v)) row.coeffs[f] = -inst.edge(f).accept_prob / rate;
    prob.constraints.push_back(std::move(row));
  }
  add_shared_rows(inst, prob);
  return prob;
}

double evaluate_profit(const Instance& inst, std::span<const double> x) {
  double total = 0.0;
  for (EdgeId f = 0; f < inst.num_edges(); ++f)
    total += inst.edge(f).profit * x[f] * inst.edge(f).accept_prob;
  return total;
}

double evaluate_fairness(const Instance& inst, std::span<const double> x) {
  if (inst.num_request_types() == 0) return 0.0;
  double worst = std::numeric_limits<double>::infinity();
  for (RequestIndex v = 0; v < inst.num_request_types(); ++v) {
    double served = 0.0;
    for (EdgeId f : inst.edges_of_request(v)) served += x[f] * inst.edge(f).accept_prob;
    worst = std::min(worst, served / inst.request_type(v).rate);
  }
  return worst;
}

ValidationReport check_feasibility(const Instance& inst, std::span<const double> x, double tol) {
  ValidationReport report;
  if (x.size() != inst.num_edges()) {
    report.violations.push_back({ViolationKind::WrongLength, "x",
                                 "expected " + std::to_string(inst.num_edges()) + " entries, got " +
                                     std::to_string(x.size())});
    return report;
  }
  auto describe = [](const char* what, double lhs, double rhs) {
    std::ostringstream os;
    os.precision(12);
    os << what << ": " << lhs << " > " << rhs;
    return os.str();
  };

  for (DriverIndex u = 0; u < inst.num_drivers(); ++u) {
    double matched = 0.0, probes = 0.0;
    for (EdgeId f : inst.edges_of_driver(u)) {
      matched += x[f] * inst.edge(f).accept_prob;
      probes += x[f];
    }
    const std::string who = "driver " + inst.driver(u).id;
    if (matched > 1.0 + tol)
      report.violations.push_back(
          {ViolationKind::DriverCapacity, who, describe("capacity", matched, 1.0)});
    if (probes > inst.driver(u).quota + tol)
      report.violations.push_back({ViolationKind::DriverProbeQuota, who,
                                   describe("probe quota", probes, inst.driver(u).quota)});
  }
  for (RequestIndex v = 0; v < inst.num_request_types(); ++v) {
    double probes = 0.0;
    for (EdgeId f : inst.edges_of_request(v)) probes += x[f];
    const double rate = inst.request_type(v).rate;
    if (probes > rate + tol)
      report.violations.push_back({ViolationKind::ArrivalRate, "request " + inst.request_type(v).id,
                                   describe("arrival rate", probes, rate)});
  }
  for (EdgeId f = 0; f < x.size(); ++f)
    if (x[f] < -tol)
      report.violations.push_back(
          {ViolationKind::NegativeValue, "edge " + std::to_string(f), "x_f < 0"});
  return report;
}

Benchmarks solve_benchmarks(const Instance& inst) {
  const LpSolution profit = solve_lp(build_profit_lp(inst));
  const LpSolution fairness = solve_lp(build_fairness_lp(inst));
  if (profit.status != LpStatus::Optimal)
    throw std::runtime_error(std::string("profit LP: ") + to_string(profit.status));
  if (fairness.status != LpStatus::Optimal)
    throw std::runtime_error(std::string("fairness LP: ") + to_string(fairness.status));

  Benchmarks b;
  b.x_star = profit.values;
  b.y_star.assign(fairness.values.begin(), fairness.values.end() - 1);
  b.opt_p = profit.objective_value;
  b.opt_f = fairness.objective_value;
  return b;
}

}  // namespace fairmatch
