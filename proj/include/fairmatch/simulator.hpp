#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairmatch/instance.hpp"
#include "fairmatch/policies.hpp"
#include "json.hpp"

namespace fairmatch {

// When a driver with quota D leaves the system.
enum class RemovalRule {
  AtQuota,     // after the D-th cancellation (at most D assignments while unmatched)
  AfterQuota,  // after the (D+1)-th cancellation
};

struct SimulationOptions {
  RemovalRule removal = RemovalRule::AtQuota;
};

struct DriverState {
  bool matched = false;
  int assignments_received = 0;
  int cancellations = 0;
};

struct Match {
  EdgeId edge;
  int round;  // 1-based
};

struct EpisodeOutcome {
  std::vector<Match> matches;
  std::vector<int> matches_per_type;
  // Successful assignments (driver available when assigned), per edge.
  std::vector<int> assignments_per_edge;
  // First round at which each driver is unavailable; horizon + 1 if never.
  // Encodes the per-round availability bits.
  std::vector<int> unavailable_from;
  std::vector<DriverState> drivers;
  double total_profit = 0.0;

  bool available_at(DriverIndex u, int round) const { return round < unavailable_from[u]; }
};

// T rounds of KIID arrivals: type v with probability r_v / T each round.
// Deterministic in (inst, policy, seed).
EpisodeOutcome run_episode(const Instance& inst, const Policy& policy, std::uint64_t seed,
                           const SimulationOptions& options = {});

struct Estimates {
  std::string policy;
  std::size_t iterations = 0;
  int horizon = 0;
  std::size_t num_drivers = 0;

  double profit_mean = 0.0;
  double profit_se = 0.0;

  // E[|M_v|] / r_v and its standard error, per request type.
  std::vector<double> rate_mean;
  std::vector<double> rate_se;

  // min_v rate_mean; the standard error is that of the minimizing type.
  double fairness = 0.0;
  double fairness_se = 0.0;
  std::size_t fairness_argmin = 0;

  // Expected successful assignments per edge (kappa_f).
  std::vector<double> kappa_mean;
  std::vector<double> kappa_se;

  // Episodes in which driver u was available at round t, row-major
  // [u * horizon + (t - 1)].
  std::vector<std::int64_t> available_count;

  double availability(DriverIndex u, int round) const;
  double availability_se(DriverIndex u, int round) const;
};

struct MonteCarloOptions {
  int threads = 0;  // <= 0: OpenMP default
  SimulationOptions simulation;
};

// Episode i uses seed derive_seed(base_seed, i). Integer tallies are merged
// exactly and per-episode profits are summed in index order, so the result
// is bit-identical for every thread count.
Estimates run_monte_carlo(const Instance& inst, const Policy& policy, std::size_t iterations,
                          std::uint64_t base_seed, const MonteCarloOptions& options = {});

// Single-threaded reference of run_monte_carlo; same output bit for bit.
Estimates run_monte_carlo_serial(const Instance& inst, const Policy& policy,
                                 std::size_t iterations, std::uint64_t base_seed,
                                 const SimulationOptions& options = {});

struct CompetitiveRatios {
  std::optional<double> profit;  // empty when the optimum is 0
  std::optional<double> fairness;
  double profit_se = 0.0;
  double fairness_se = 0.0;
};

CompetitiveRatios competitive_ratios(const Estimates& est, double opt_p, double opt_f);

struct ExactValues {
  double profit = 0.0;
  double fairness = 0.0;
  std::vector<double> expected_matches;  // E[|M_v|]
  std::vector<double> rate;              // E[|M_v|] / r_v
  std::vector<double> kappa;             // expected successful assignments per edge
  // Pr[driver u available at round t], [u * horizon + (t - 1)].
  std::vector<double> availability;
};

inline constexpr double kExactWorkLimit = 1e8;

// Exact expected profit and fairness of NADAP(z). Non-adaptive sampling does
// not look at availability, so each driver's state evolves as its own Markov
// chain and expectations follow by linearity. Throws std::length_error when
// T * sum_u (quota_u + 1) |E_u| exceeds kExactWorkLimit.
ExactValues exact_evaluate(const Instance& inst, const NonAdaptiveVector& z,
                           const SimulationOptions& options = {});

// (1 - 1/T)^(t-1) (1 - (t-1)/T), for 1 <= t <= T.
double availability_lower_bound(int t, int horizon);

// sum_{t=1}^T (1/T) availability_lower_bound(t, T); tends to 1/e. Times
// (alpha x*_f + beta y*_f) it bounds kappa_f from below.
double kappa_bound_factor(int horizon);

nlohmann::json estimates_to_json(const Estimates& est, std::optional<double> alpha,
                                 std::optional<double> beta, std::optional<int> delta,
                                 const CompetitiveRatios& ratios);

}  // namespace fairmatch
