#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fairmatch/fixtures.hpp"
#include "fairmatch/lp.hpp"
#include "fairmatch/policies.hpp"
#include "fairmatch/random.hpp"

using namespace fairmatch;

namespace {

std::vector<std::uint8_t> all_available(const Instance& inst) {
  return std::vector<std::uint8_t>(inst.num_drivers(), 1);
}

// |count - n p| <= 5 sd of Binomial(n, p).
void expect_binomial(std::size_t count, std::size_t n, double p) {
  const double sd = std::sqrt(n * p * (1.0 - p));
  EXPECT_NEAR(static_cast<double>(count), n * p, 5.0 * sd + 1e-9) << "p = " << p;
}

}  // namespace

TEST(NonAdaptiveVector, RejectsNegativeAndOverfull) {
  const Instance inst = fixtures::complete_2x2();
  EXPECT_THROW(NonAdaptiveVector(inst, {-0.1, 0.0, 0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(NonAdaptiveVector(inst, {0.6, 0.0, 0.6, 0.0}), std::invalid_argument);
  EXPECT_NO_THROW(NonAdaptiveVector(inst, {0.5, 0.5, 0.5, 0.5 + 1e-13}));
}

TEST(NonAdaptiveVector, EntriesFollowEdgeLists) {
  const Instance inst = fixtures::complete_2x2();
  const NonAdaptiveVector z(inst, {0.1, 0.2, 0.3, 0.4});
  // Edges (a,v1), (a,v2), (b,v1), (b,v2).
  ASSERT_EQ(z.entries(0).size(), 2u);
  EXPECT_EQ(z.entries(0)[0].edge, 0u);
  EXPECT_EQ(z.entries(0)[1].edge, 2u);
  EXPECT_EQ(z.entries(0)[1].driver, 1u);
  EXPECT_NEAR(z.mass(0), 0.4, 1e-15);
  EXPECT_NEAR(z.mass(1), 0.6, 1e-15);
}

TEST(MakeNadap, Formula) {
  for (const Instance& inst : fixtures::tiny_instances(20, 4)) {
    const Benchmarks b = solve_benchmarks(inst);
    const NonAdaptiveVector z = make_nadap(b.x_star, b.y_star, 0.3, 0.6, inst);
    for (RequestIndex v = 0; v < inst.num_request_types(); ++v) {
      EXPECT_LE(z.mass(v), 1.0 + kMassTolerance);
      double raw = 0.0;
      for (EdgeId f : inst.edges_of_request(v))
        raw += (0.3 * b.x_star[f] + 0.6 * b.y_star[f]) / inst.request_type(v).rate;
      if (raw <= 1.0)
        for (EdgeId f : inst.edges_of_request(v))
          EXPECT_NEAR(z.prob(f), (0.3 * b.x_star[f] + 0.6 * b.y_star[f]) / inst.request_type(v).rate,
                      1e-15);
    }
  }
}

TEST(MakeNadap, ValidatesArguments) {
  const Instance inst = fixtures::single_edge();
  const std::vector<double> x{1.0}, bad{2.0};
  EXPECT_THROW(make_nadap(x, x, -0.1, 0.5, inst), std::invalid_argument);
  EXPECT_THROW(make_nadap(x, x, 0.6, 0.6, inst), std::invalid_argument);
  EXPECT_THROW(make_nadap(bad, x, 0.5, 0.5, inst), std::invalid_argument);
  EXPECT_NO_THROW(make_nadap(x, x, 0.7, 0.3, inst));
}

TEST(MakeNadap, AlphaOneBetaZeroIsProfitSolution) {
  const Instance s = build_star_instance(10, 0.01);
  const Benchmarks b = solve_benchmarks(s);
  const NonAdaptiveVector z = make_nadap(b.x_star, b.y_star, 1.0, 0.0, s);
  EXPECT_NEAR(z.prob(0), 1.0, 1e-9);
  for (EdgeId f = 1; f < s.num_edges(); ++f) EXPECT_NEAR(z.prob(f), 0.0, 1e-9);
}

TEST(UniformVector, OneOverDegree) {
  const Instance inst = fixtures::complete_2x2();
  const NonAdaptiveVector z = make_uniform_vector(inst);
  for (EdgeId f = 0; f < 4; ++f) EXPECT_DOUBLE_EQ(z.prob(f), 0.5);
}

TEST(DecideNonadaptive, FrequenciesMatchVector) {
  const Instance inst = fixtures::complete_2x2();
  const NonAdaptiveVector z(inst, {0.15, 0.5, 0.45, 0.25});
  const auto flags = all_available(inst);
  Rng rng(42);
  const std::size_t n = 200000;
  std::vector<std::size_t> hits(4, 0);
  std::size_t rejects = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Decision d = decide_nonadaptive(z, 0, AvailabilityView(flags), rng);
    if (d.assigns())
      ++hits[*d.edge];
    else
      ++rejects;
  }
  expect_binomial(hits[0], n, 0.15);
  expect_binomial(hits[2], n, 0.45);
  expect_binomial(rejects, n, 0.40);
  EXPECT_EQ(hits[1] + hits[3], 0u);
}

TEST(DecideNonadaptive, NoResamplingWhenUnavailable) {
  const Instance inst = fixtures::complete_2x2();
  const NonAdaptiveVector z(inst, {0.5, 0.0, 0.5, 0.0});
  std::vector<std::uint8_t> flags{0, 1};
  Rng rng(7);
  const std::size_t n = 100000;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Decision d = decide_nonadaptive(z, 0, AvailabilityView(flags), rng);
    if (d.assigns()) {
      EXPECT_EQ(*d.edge, 2u);
      ++assigned;
    }
  }
  expect_binomial(assigned, n, 0.5);
}

TEST(DecideGreedy, HighestProbabilityThenSmallestId) {
  const Instance inst({{"c", 1, {}}, {"a", 1, {}}, {"b", 1, {}}}, {{"v", 1.0, {}}},
                      {{0, 0, 0.9, 0.1}, {1, 0, 0.9, 0.1}, {2, 0, 0.5, 1.0}}, 1);
  std::vector<std::uint8_t> flags{1, 1, 1};
  EXPECT_EQ(decide_greedy(inst, 0, AvailabilityView(flags)), Decision::assign(1));
  flags[1] = 0;
  EXPECT_EQ(decide_greedy(inst, 0, AvailabilityView(flags)), Decision::assign(0));
  flags[0] = 0;
  EXPECT_EQ(decide_greedy(inst, 0, AvailabilityView(flags)), Decision::assign(2));
  flags[2] = 0;
  EXPECT_EQ(decide_greedy(inst, 0, AvailabilityView(flags)), Decision::reject());

  const GreedyPolicy g(inst);
  Rng rng(1);
  std::vector<std::uint8_t> all{1, 1, 1};
  EXPECT_EQ(g.decide(0, AvailabilityView(all), rng), Decision::assign(1));
}

TEST(DecideUniform, SamplesAllEdgesAndRejectsUnavailable) {
  const Instance inst = fixtures::complete_2x2();
  std::vector<std::uint8_t> flags{1, 0};
  Rng rng(3);
  const std::size_t n = 100000;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Decision d = decide_uniform(inst, 1, AvailabilityView(flags), rng);
    if (d.assigns()) {
      EXPECT_EQ(*d.edge, 1u);
      ++assigned;
    }
  }
  expect_binomial(assigned, n, 0.5);
}

TEST(Policies, AssignedEdgeIsIncident) {
  Rng rng(9);
  for (const Instance& inst : fixtures::tiny_instances(20, 8)) {
    const Benchmarks b = solve_benchmarks(inst);
    const NonAdaptivePolicy nadap(make_nadap(b.x_star, b.y_star, 0.5, 0.5, inst));
    const GreedyPolicy greedy(inst);
    const UniformPolicy uniform(inst);
    const auto flags = all_available(inst);
    for (RequestIndex v = 0; v < inst.num_request_types(); ++v)
      for (const Policy* p : {static_cast<const Policy*>(&nadap), static_cast<const Policy*>(&greedy),
                              static_cast<const Policy*>(&uniform)})
        for (int k = 0; k < 20; ++k) {
          const Decision d = p->decide(v, AvailabilityView(flags), rng);
          if (d.assigns()) EXPECT_EQ(inst.edge(*d.edge).request_type, v) << p->name();
        }
  }
}
