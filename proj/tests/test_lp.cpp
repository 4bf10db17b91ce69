#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fairmatch/fixtures.hpp"
#include "fairmatch/lp.hpp"
#include "fairmatch/random.hpp"
#include "fairmatch/simplex.hpp"
#include "oracles.hpp"

using namespace fairmatch;

namespace {

LpProblem random_lp(Rng& rng) {
  const std::size_t n = 1 + rng.index(6);
  const std::size_t m = rng.index(6);  // plus the bounding row
  LpProblem p;
  for (std::size_t i = 0; i < n; ++i) {
    p.objective.push_back(std::round(rng.uniform(-2.0, 3.0) * 8.0) / 8.0);
    p.variable_names.push_back("x" + std::to_string(i));
  }
  p.constraints.push_back({"box", std::vector<double>(n, 1.0), Relation::LessEq, 10.0});
  for (std::size_t r = 0; r < m; ++r) {
    LpConstraint c;
    c.name = "c" + std::to_string(r);
    for (std::size_t i = 0; i < n; ++i)
      c.coeffs.push_back(rng.bernoulli(0.3) ? 0.0 : std::round(rng.uniform(-3.0, 3.0) * 4.0) / 4.0);
    const double kind = rng.uniform();
    c.relation = kind < 0.7 ? Relation::LessEq : kind < 0.85 ? Relation::GreaterEq : Relation::Equal;
    c.bound = std::round(rng.uniform(-2.0, 8.0) * 4.0) / 4.0;
    p.constraints.push_back(c);
  }
  return p;
}

}  // namespace

TEST(Simplex, Trivial) {
  LpProblem p{"t", {1.0}, {{"c", {1.0}, Relation::LessEq, 1.0}}, {"x"}};
  const LpSolution s = solve_lp(p);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.values[0], 1.0, 1e-12);
  EXPECT_NEAR(s.objective_value, 1.0, 1e-12);
}

TEST(Simplex, Infeasible) {
  LpProblem p{"t", {1.0}, {{"a", {1.0}, Relation::LessEq, 1.0}, {"b", {1.0}, Relation::GreaterEq, 2.0}},
              {"x"}};
  EXPECT_EQ(solve_lp(p).status, LpStatus::Infeasible);
}

TEST(Simplex, Unbounded) {
  LpProblem p{"t", {1.0, 0.0}, {{"a", {-1.0, 1.0}, Relation::LessEq, 1.0}}, {"x", "y"}};
  EXPECT_EQ(solve_lp(p).status, LpStatus::Unbounded);
}

TEST(Simplex, NegativeRightHandSide) {
  // x + y >= 2 written as -x - y <= -2; minimize x + 2y.
  LpProblem p{"t", {-1.0, -2.0},
              {{"a", {-1.0, -1.0}, Relation::LessEq, -2.0}, {"b", {1.0, 0.0}, Relation::LessEq, 1.5}},
              {"x", "y"}};
  const LpSolution s = solve_lp(p);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.objective_value, -2.5, 1e-12);
}

TEST(Simplex, MalformedThrows) {
  LpProblem p{"t", {1.0, 1.0}, {{"a", {1.0}, Relation::LessEq, 1.0}}, {"x", "y"}};
  EXPECT_FALSE(p.well_formed());
  EXPECT_THROW(solve_lp(p), std::invalid_argument);
}

TEST(Simplex, MatchesVertexEnumeration) {
  Rng rng(20240611);
  int optimal = 0, infeasible = 0;
  for (int k = 0; k < 100; ++k) {
    const LpProblem p = random_lp(rng);
    const auto truth = oracle::vertex_enumeration(p);
    const LpSolution s = solve_lp(p);
    if (!truth) {
      EXPECT_EQ(s.status, LpStatus::Infeasible) << "lp " << k;
      ++infeasible;
      continue;
    }
    ASSERT_EQ(s.status, LpStatus::Optimal) << "lp " << k;
    EXPECT_NEAR(s.objective_value, *truth, 1e-7) << "lp " << k;
    EXPECT_LE(max_violation(p, s.values), 1e-7) << "lp " << k;
    ++optimal;
  }
  EXPECT_GT(optimal, 50);
  EXPECT_GT(infeasible, 0);
}

TEST(Simplex, Deterministic) {
  const Instance inst = fixtures::tiny_instances(1, 3)[0];
  const LpSolution a = solve_lp(build_fairness_lp(inst));
  const LpSolution b = solve_lp(build_fairness_lp(inst));
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(ProfitLp, Star) {
  const Instance s = build_star_instance(10, 0.01);
  const LpSolution sol = solve_lp(build_profit_lp(s));
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_NEAR(sol.objective_value, 1.0, 1e-9);
  EXPECT_NEAR(sol.values[0], 1.0, 1e-9);
  for (std::size_t j = 1; j <= 10; ++j) EXPECT_NEAR(sol.values[j], 0.0, 1e-9);
  EXPECT_NEAR(evaluate_profit(s, sol.values), 1.0, 1e-12);
}

TEST(ProfitLp, SingleEdge) {
  const Instance inst = fixtures::single_edge();
  const LpSolution sol = solve_lp(build_profit_lp(inst));
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_NEAR(sol.objective_value, 0.7, 1e-12);
  EXPECT_NEAR(sol.values[0], 1.0, 1e-12);
}

TEST(ProfitLp, NoEdges) {
  const Instance inst({{"u", 1, {}}}, {{"v", 1.0, {}}}, {}, 1);
  const LpSolution sol = solve_lp(build_profit_lp(inst));
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_EQ(sol.objective_value, 0.0);
}

TEST(ProfitLp, RowLayout) {
  const LpProblem p = build_profit_lp(fixtures::complete_2x2());
  EXPECT_EQ(p.num_variables(), 4u);
  EXPECT_EQ(p.num_constraints(), 2u + 2u + 2u);
  EXPECT_TRUE(p.well_formed());
}

TEST(FairnessLp, Star) {
  const double K = 10, eps = 0.01;
  const Instance s = build_star_instance(10, eps);
  const LpSolution sol = solve_lp(build_fairness_lp(s));
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_NEAR(sol.objective_value, eps / (K + eps), 1e-9);
  EXPECT_NEAR(sol.values[0], eps / (eps + K), 1e-9);
  for (std::size_t j = 1; j <= 10; ++j) EXPECT_NEAR(sol.values[j], 1.0 / (eps + K), 1e-9);
  const std::vector<double> y(sol.values.begin(), sol.values.end() - 1);
  EXPECT_NEAR(evaluate_fairness(s, y), eps / (K + eps), 1e-12);
}

TEST(FairnessLp, EmptyRequestTypeGivesZero) {
  const Instance inst({{"u", 1, {}}}, {{"v1", 1.0, {}}, {"v2", 1.0, {}}}, {{0, 0, 1.0, 1.0}}, 2);
  const LpSolution sol = solve_lp(build_fairness_lp(inst));
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_NEAR(sol.objective_value, 0.0, 1e-12);
}

TEST(FairnessLp, Complete2x2) {
  const LpProblem p = build_fairness_lp(fixtures::complete_2x2());
  const LpSolution sol = solve_lp(p);
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  const auto truth = oracle::vertex_enumeration(p);
  ASSERT_TRUE(truth.has_value());
  EXPECT_NEAR(*truth, 1.0, 1e-12);
  EXPECT_NEAR(sol.objective_value, 1.0, 1e-9);
  EXPECT_EQ(p.variable_names.back(), "eta");
}

TEST(Evaluate, ZeroVector) {
  const Instance inst = fixtures::complete_2x2();
  const std::vector<double> zero(inst.num_edges(), 0.0);
  EXPECT_EQ(evaluate_profit(inst, zero), 0.0);
  EXPECT_EQ(evaluate_fairness(inst, zero), 0.0);
}

TEST(Evaluate, UniformOnComplete2x2) {
  const Instance inst = fixtures::complete_2x2();
  EXPECT_DOUBLE_EQ(evaluate_fairness(inst, std::vector<double>(4, 0.5)), 1.0);
}

TEST(Evaluate, MatchesReverseSummation) {
  Rng rng(5);
  for (const Instance& inst : fixtures::tiny_instances(20, 11)) {
    std::vector<double> x;
    for (std::size_t f = 0; f < inst.num_edges(); ++f) x.push_back(rng.uniform(0.0, 2.0));
    double profit = 0.0;
    for (std::size_t f = inst.num_edges(); f-- > 0;)
      profit += inst.edge(f).profit * inst.edge(f).accept_prob * x[f];
    EXPECT_NEAR(evaluate_profit(inst, x), profit, 1e-12);

    double fair = 1e300;
    for (std::size_t v = inst.num_request_types(); v-- > 0;) {
      double s = 0.0;
      for (std::size_t f = inst.num_edges(); f-- > 0;)
        if (inst.edge(f).request_type == v) s += x[f] * inst.edge(f).accept_prob;
      fair = std::min(fair, s / inst.request_type(v).rate);
    }
    EXPECT_NEAR(evaluate_fairness(inst, x), fair, 1e-12);
  }
}

TEST(Feasibility, DetectsEachRow) {
  const Instance inst = fixtures::complete_2x2();  // quota 1, p 1, r 1
  EXPECT_TRUE(check_feasibility(inst, std::vector<double>(4, 0.5), 1e-7).ok());
  EXPECT_TRUE(check_feasibility(inst, std::vector<double>{1.0, 0.2, 0.0, 0.0}, 1e-7).has(ViolationKind::DriverCapacity));
  EXPECT_TRUE(check_feasibility(inst, std::vector<double>{0.0, 0.0, 0.7, 0.7}, 1e-7).has(ViolationKind::ArrivalRate) ||
              check_feasibility(inst, std::vector<double>{0.0, 0.0, 0.7, 0.7}, 1e-7).has(ViolationKind::DriverCapacity));
  EXPECT_TRUE(check_feasibility(inst, std::vector<double>{-0.1, 0.0, 0.0, 0.0}, 1e-7).has(ViolationKind::NegativeValue));
  EXPECT_TRUE(check_feasibility(inst, std::vector<double>{0.0}, 1e-7).has(ViolationKind::WrongLength));
  EXPECT_TRUE(check_feasibility(inst, std::vector<double>{0.5 + 5e-8, 0.5, 0.5, 0.5}, 1e-7).ok());
}

TEST(Feasibility, ProbeQuota) {
  // p small so capacity is loose and the probe budget binds.
  const Instance inst({{"u", 1, {}}}, {{"v", 2.0, {}}}, {{0, 0, 0.1, 1.0}}, 2);
  EXPECT_TRUE(check_feasibility(inst, std::vector<double>{1.5}, 1e-7).has(ViolationKind::DriverProbeQuota));
  const LpSolution sol = solve_lp(build_profit_lp(inst));
  EXPECT_NEAR(sol.values[0], 1.0, 1e-12);
}

TEST(Benchmarks, CrossDominanceOnTinyInstances) {
  for (const Instance& inst : fixtures::tiny_instances(50, 99)) {
    const Benchmarks b = solve_benchmarks(inst);
    EXPECT_TRUE(check_feasibility(inst, b.x_star, 1e-7).ok());
    EXPECT_TRUE(check_feasibility(inst, b.y_star, 1e-7).ok());
    EXPECT_GE(b.opt_p, evaluate_profit(inst, b.y_star) - 1e-7);
    EXPECT_GE(b.opt_f, evaluate_fairness(inst, b.x_star) - 1e-7);
    EXPECT_NEAR(b.opt_p, evaluate_profit(inst, b.x_star), 1e-9);
    EXPECT_NEAR(b.opt_f, evaluate_fairness(inst, b.y_star), 1e-9);
  }
}

TEST(LpFormat, Sections) {
  std::ostringstream os;
  write_lp_format(os, build_fairness_lp(fixtures::single_edge()));
  const std::string s = os.str();
  for (const char* key : {"Maximize", "Subject To", "Bounds", "End", "eta", "fair_0"})
    EXPECT_NE(s.find(key), std::string::npos) << key;
}
