#include "fairmatch/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace fairmatch {

bool LpProblem::well_formed() const {
  const std::size_t n = objective.size();
  if (variable_names.size() != n) return false;
  for (double c : objective)
    if (!std::isfinite(c)) return false;
  for (const LpConstraint& row : constraints) {
    if (row.coeffs.size() != n || !std::isfinite(row.bound)) return false;
    for (double a : row.coeffs)
      if (!std::isfinite(a)) return false;
  }
  return true;
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t i, std::size_t j) { return a_[i * (cols_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, cols_); }
  double rhs(std::size_t i) const { return at(i, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  // Reduced costs d_j = c_j - c_B B^-1 A_j for the current basis.
  std::vector<double> reduced_costs(const std::vector<double>& cost) const {
    std::vector<double> d(cost.begin(), cost.end());
    for (std::size_t i = 0; i < rows_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &a_[i * (cols_ + 1)];
      for (std::size_t j = 0; j < cols_; ++j) d[j] -= cb * row[j];
    }
    return d;
  }

  void pivot(std::size_t r, std::size_t k, std::vector<double>& d) {
    const std::size_t w = cols_ + 1;
    double* prow = &a_[r * w];
    const double inv = 1.0 / prow[k];
    for (std::size_t j = 0; j < w; ++j) prow[j] *= inv;
    prow[k] = 1.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      double* row = &a_[i * w];
      const double f = row[k];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < w; ++j) row[j] -= f * prow[j];
      row[k] = 0.0;
    }
    const double fd = d[k];
    if (fd != 0.0) {
      for (std::size_t j = 0; j < cols_; ++j) d[j] -= fd * prow[j];
      d[k] = 0.0;
    }
    basis_[r] = k;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> a_;  // row-major, last column is the right-hand side
  std::vector<std::size_t> basis_;
};

enum class PhaseResult { Optimal, Unbounded };

// Maximizes cost over the tableau's current basis using Bland's rule.
// Columns flagged in `banned` never enter.
PhaseResult run_phase(Tableau& t, const std::vector<double>& cost,
                      const std::vector<char>& banned, std::size_t& iterations,
                      std::size_t limit) {
  std::vector<double> d = t.reduced_costs(cost);
  for (;;) {
    std::size_t enter = t.cols();
    for (std::size_t j = 0; j < t.cols(); ++j) {
      if (!banned[j] && d[j] > kPivotTolerance) {
        enter = j;
        break;
      }
    }
    if (enter == t.cols()) return PhaseResult::Optimal;

    std::size_t leave = t.rows();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.rows(); ++i) {
      const double a = t.at(i, enter);
      if (a <= kPivotTolerance) continue;
      const double ratio = std::max(t.rhs(i), 0.0) / a;
      if (ratio < best - 1e-12 ||
          (ratio <= best + 1e-12 && leave < t.rows() && t.basis()[i] < t.basis()[leave])) {
        if (ratio < best) best = ratio;
        leave = i;
      }
    }
    if (leave == t.rows()) return PhaseResult::Unbounded;

    if (++iterations > limit)
      throw std::runtime_error("simplex iteration limit exceeded (cycling?)");
    t.pivot(leave, enter, d);
  }
}

}  // namespace

LpSolution solve_lp(const LpProblem& prob) {
  if (!prob.well_formed()) throw std::invalid_argument("malformed LP problem '" + prob.name + "'");

  const std::size_t n = prob.num_variables();
  const std::size_t m = prob.num_constraints();

  // Normalize to nonnegative right-hand sides.
  struct Row {
    std::vector<double> coeffs;
    Relation rel;
    double bound;
  };
  std::vector<Row> rows;
  rows.reserve(m);
  std::size_t n_slack = 0, n_art = 0;
  for (const LpConstraint& c : prob.constraints) {
    Row r{c.coeffs, c.relation, c.bound};
    if (r.bound < 0.0) {
      for (double& a : r.coeffs) a = -a;
      r.bound = -r.bound;
      if (r.rel == Relation::LessEq)
        r.rel = Relation::GreaterEq;
      else if (r.rel == Relation::GreaterEq)
        r.rel = Relation::LessEq;
    }
    if (r.rel != Relation::Equal) ++n_slack;
    if (r.rel != Relation::LessEq) ++n_art;
    rows.push_back(std::move(r));
  }

  // Column layout: originals | slack/surplus | artificials.
  const std::size_t cols = n + n_slack + n_art;
  Tableau t(m, cols);
  std::vector<char> is_art(cols, 0);
  std::size_t next_slack = n, next_art = n + n_slack;
  for (std::size_t i = 0; i < m; ++i) {
    const Row& r = rows[i];
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = r.coeffs[j];
    t.rhs(i) = r.bound;
    switch (r.rel) {
      case Relation::LessEq:
        t.at(i, next_slack) = 1.0;
        t.basis()[i] = next_slack++;
        break;
      case Relation::GreaterEq:
        t.at(i, next_slack++) = -1.0;
        [[fallthrough]];
      case Relation::Equal:
        t.at(i, next_art) = 1.0;
        is_art[next_art] = 1;
        t.basis()[i] = next_art++;
        break;
    }
  }

  const std::size_t limit = 50 * (m + cols) + 1000;
  LpSolution sol;
  std::vector<char> banned(cols, 0);

  if (n_art > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j)
      if (is_art[j]) phase1[j] = -1.0;
    run_phase(t, phase1, banned, sol.iterations, limit);

    double infeasibility = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (is_art[t.basis()[i]]) infeasibility += std::max(t.rhs(i), 0.0);
      scale = std::max(scale, std::abs(rows[i].bound));
    }
    if (infeasibility > kPivotTolerance * scale) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }

    // Drive zero-level artificials out of the basis where possible; rows
    // with no usable pivot are redundant and keep the artificial at zero.
    std::vector<double> dummy(cols, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      if (!is_art[t.basis()[i]]) continue;
      for (std::size_t j = 0; j < n + n_slack; ++j) {
        if (std::abs(t.at(i, j)) > kPivotTolerance) {
          t.pivot(i, j, dummy);
          break;
        }
      }
    }
    banned = is_art;
  }

  std::vector<double> cost(cols, 0.0);
  std::copy(prob.objective.begin(), prob.objective.end(), cost.begin());
  if (run_phase(t, cost, banned, sol.iterations, limit) == PhaseResult::Unbounded) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }

  sol.status = LpStatus::Optimal;
  sol.values.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t b = t.basis()[i];
    if (b < n) sol.values[b] = std::max(t.rhs(i), 0.0);
  }
  double obj = 0.0;
  for (std::size_t j = 0; j < n; ++j) obj += prob.objective[j] * sol.values[j];
  sol.objective_value = obj;
  return sol;
}

double max_violation(const LpProblem& prob, const std::vector<double>& x) {
  double worst = 0.0;
  for (double xi : x) worst = std::max(worst, -xi);
  for (const LpConstraint& c : prob.constraints) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += c.coeffs[j] * x[j];
    switch (c.relation) {
      case Relation::LessEq: worst = std::max(worst, lhs - c.bound); break;
      case Relation::GreaterEq: worst = std::max(worst, c.bound - lhs); break;
      case Relation::Equal: worst = std::max(worst, std::abs(lhs - c.bound)); break;
    }
  }
  return worst;
}

namespace {

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_terms(std::ostream& os, const std::vector<double>& coeffs,
                 const std::vector<std::string>& names) {
  bool first = true;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j] == 0.0) continue;
    const double c = coeffs[j];
    if (first)
      os << (c < 0 ? " -" : " ");
    else
      os << (c < 0 ? " - " : " + ");
    os << fmt_num(std::abs(c)) << ' ' << names[j];
    first = false;
  }
  if (first) os << " 0 " << (names.empty() ? "x" : names.front());
}

}  // namespace

void write_lp_format(std::ostream& os, const LpProblem& prob) {
  os << "\\ " << prob.name << '\n';
  os << "Maximize\n obj:";
  write_terms(os, prob.objective, prob.variable_names);
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < prob.constraints.size(); ++i) {
    const LpConstraint& c = prob.constraints[i];
    os << ' ' << (c.name.empty() ? "c" + std::to_string(i) : c.name) << ':';
    write_terms(os, c.coeffs, prob.variable_names);
    switch (c.relation) {
      case Relation::LessEq: os << " <= "; break;
      case Relation::GreaterEq: os << " >= "; break;
      case Relation::Equal: os << " = "; break;
    }
    os << fmt_num(c.bound) << '\n';
  }
  os << "Bounds\n";
  for (const std::string& name : prob.variable_names) os << ' ' << name << " >= 0\n";
  os << "End\n";
}

}  // namespace fairmatch
