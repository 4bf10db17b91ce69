#include "fairmatch/simulator.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairmatch {

namespace {

class ArrivalSampler {
 public:
  explicit ArrivalSampler(const Instance& inst) {
    double acc = 0.0;
    cumulative_.reserve(inst.num_request_types());
    for (const RequestType& r : inst.request_types()) {
      acc += r.rate;
      cumulative_.push_back(acc);
    }
    total_ = acc;
  }

  RequestIndex draw(Rng& rng) const {
    const double target = rng.uniform() * total_;
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    const auto v = static_cast<RequestIndex>(it - cumulative_.begin());
    return std::min(v, cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

int removal_threshold(int quota, RemovalRule rule) {
  return rule == RemovalRule::AtQuota ? quota : quota + 1;
}

EpisodeOutcome simulate(const Instance& inst, const ArrivalSampler& arrivals, const Policy& policy,
                        std::uint64_t seed, const SimulationOptions& options) {
  const int horizon = inst.horizon();
  EpisodeOutcome out;
  out.matches_per_type.assign(inst.num_request_types(), 0);
  out.assignments_per_edge.assign(inst.num_edges(), 0);
  out.unavailable_from.assign(inst.num_drivers(), horizon + 1);
  out.drivers.assign(inst.num_drivers(), DriverState{});

  std::vector<std::uint8_t> available(inst.num_drivers(), 1);
  const AvailabilityView view(available);
  Rng rng(seed);

  for (int t = 1; t <= horizon; ++t) {
    const RequestIndex v = arrivals.draw(rng);
    const Decision d = policy.decide(v, view, rng);
    if (!d.assigns()) continue;

    const EdgeId f = *d.edge;
    const Edge& e = inst.edge(f);
    if (e.request_type != v) throw std::logic_error("policy assigned an edge of another type");
    const DriverIndex u = e.driver;
    if (!available[u]) continue;

    DriverState& s = out.drivers[u];
    ++s.assignments_received;
    ++out.assignments_per_edge[f];
    if (rng.bernoulli(e.accept_prob)) {
      s.matched = true;
      out.total_profit += e.profit;
      ++out.matches_per_type[v];
      out.matches.push_back({f, t});
    } else {
      ++s.cancellations;
    }
    if (s.matched ||
        s.cancellations >= removal_threshold(inst.driver(u).quota, options.removal)) {
      available[u] = 0;
      out.unavailable_from[u] = t + 1;
    }
  }
  return out;
}

// Exact integer tallies; merging is associative and commutative.
struct Tally {
  std::vector<std::int64_t> match_sum, match_sq;
  std::vector<std::int64_t> kappa_sum, kappa_sq;
  std::vector<std::int64_t> leave_hist;  // [u * (T + 2) + unavailable_from]
  std::size_t stride = 0;

  explicit Tally(const Instance& inst)
      : match_sum(inst.num_request_types()),
        match_sq(inst.num_request_types()),
        kappa_sum(inst.num_edges()),
        kappa_sq(inst.num_edges()),
        leave_hist(inst.num_drivers() * (inst.horizon() + 2)),
        stride(inst.horizon() + 2) {}

  void add(const EpisodeOutcome& ep) {
    for (std::size_t v = 0; v < match_sum.size(); ++v) {
      const std::int64_t c = ep.matches_per_type[v];
      match_sum[v] += c;
      match_sq[v] += c * c;
    }
    for (std::size_t f = 0; f < kappa_sum.size(); ++f) {
      const std::int64_t c = ep.assignments_per_edge[f];
      kappa_sum[f] += c;
      kappa_sq[f] += c * c;
    }
    for (std::size_t u = 0; u < ep.unavailable_from.size(); ++u)
      ++leave_hist[u * stride + ep.unavailable_from[u]];
  }

  void merge(const Tally& o) {
    auto acc = [](std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
      for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    };
    acc(match_sum, o.match_sum);
    acc(match_sq, o.match_sq);
    acc(kappa_sum, o.kappa_sum);
    acc(kappa_sq, o.kappa_sq);
    acc(leave_hist, o.leave_hist);
  }
};

// Mean and standard error of the mean from integer sums.
std::pair<double, double> moments(std::int64_t sum, std::int64_t sq, std::size_t n) {
  const double nn = static_cast<double>(n);
  const double mean = static_cast<double>(sum) / nn;
  if (n < 2) return {mean, 0.0};
  const double var = std::max(0.0, (static_cast<double>(sq) - nn * mean * mean) / (nn - 1.0));
  return {mean, std::sqrt(var / nn)};
}

Estimates finalize(const Instance& inst, const Policy& policy, const Tally& tally,
                   const std::vector<double>& profits) {
  const std::size_t n = profits.size();
  Estimates est;
  est.policy = policy.name();
  est.iterations = n;
  est.horizon = inst.horizon();
  est.num_drivers = inst.num_drivers();

  double sum = 0.0;
  for (double p : profits) sum += p;
  est.profit_mean = sum / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double p : profits) ss += (p - est.profit_mean) * (p - est.profit_mean);
    est.profit_se = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  }

  const std::size_t nv = inst.num_request_types();
  est.rate_mean.resize(nv);
  est.rate_se.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const auto [mean, se] = moments(tally.match_sum[v], tally.match_sq[v], n);
    const double rate = inst.request_type(v).rate;
    est.rate_mean[v] = mean / rate;
    est.rate_se[v] = se / rate;
  }
  if (nv > 0) {
    const auto it = std::min_element(est.rate_mean.begin(), est.rate_mean.end());
    est.fairness_argmin = static_cast<std::size_t>(it - est.rate_mean.begin());
    est.fairness = *it;
    est.fairness_se = est.rate_se[est.fairness_argmin];
  }

  est.kappa_mean.resize(inst.num_edges());
  est.kappa_se.resize(inst.num_edges());
  for (std::size_t f = 0; f < inst.num_edges(); ++f)
    std::tie(est.kappa_mean[f], est.kappa_se[f]) =
        moments(tally.kappa_sum[f], tally.kappa_sq[f], n);

  const int T = inst.horizon();
  est.available_count.assign(inst.num_drivers() * T, 0);
  for (std::size_t u = 0; u < inst.num_drivers(); ++u) {
    std::int64_t gone = 0;
    for (int t = 1; t <= T; ++t) {
      gone += tally.leave_hist[u * tally.stride + t];
      est.available_count[u * T + (t - 1)] = static_cast<std::int64_t>(n) - gone;
    }
  }
  return est;
}

void check_iterations(std::size_t iterations) {
  if (iterations < 1) throw std::invalid_argument("Monte Carlo needs at least one iteration");
}

}  // namespace

EpisodeOutcome run_episode(const Instance& inst, const Policy& policy, std::uint64_t seed,
                           const SimulationOptions& options) {
  return simulate(inst, ArrivalSampler(inst), policy, seed, options);
}

double Estimates::availability(DriverIndex u, int round) const {
  return static_cast<double>(available_count[u * horizon + (round - 1)]) /
         static_cast<double>(iterations);
}

double Estimates::availability_se(DriverIndex u, int round) const {
  const double p = availability(u, round);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(iterations));
}

Estimates run_monte_carlo_serial(const Instance& inst, const Policy& policy,
                                 std::size_t iterations, std::uint64_t base_seed,
                                 const SimulationOptions& options) {
  check_iterations(iterations);
  const ArrivalSampler arrivals(inst);
  Tally tally(inst);
  std::vector<double> profits(iterations);
  for (std::size_t i = 0; i < iterations; ++i) {
    const EpisodeOutcome ep = simulate(inst, arrivals, policy, derive_seed(base_seed, i), options);
    profits[i] = ep.total_profit;
    tally.add(ep);
  }
  return finalize(inst, policy, tally, profits);
}

Estimates run_monte_carlo(const Instance& inst, const Policy& policy, std::size_t iterations,
                          std::uint64_t base_seed, const MonteCarloOptions& options) {
  check_iterations(iterations);
  const ArrivalSampler arrivals(inst);
  Tally total(inst);
  std::vector<double> profits(iterations);
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
  const auto n = static_cast<std::int64_t>(iterations);

#pragma omp parallel num_threads(threads)
  {
    Tally local(inst);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
      const EpisodeOutcome ep = simulate(inst, arrivals, policy,
                                         derive_seed(base_seed, static_cast<std::uint64_t>(i)),
                                         options.simulation);
      profits[static_cast<std::size_t>(i)] = ep.total_profit;
      local.add(ep);
    }
#pragma omp critical(fairmatch_tally_merge)
    total.merge(local);
  }
  return finalize(inst, policy, total, profits);
}

CompetitiveRatios competitive_ratios(const Estimates& est, double opt_p, double opt_f) {
  CompetitiveRatios r;
  if (opt_p > 0.0) {
    r.profit = est.profit_mean / opt_p;
    r.profit_se = est.profit_se / opt_p;
  }
  if (opt_f > 0.0) {
    r.fairness = est.fairness / opt_f;
    r.fairness_se = est.fairness_se / opt_f;
  }
  return r;
}

ExactValues exact_evaluate(const Instance& inst, const NonAdaptiveVector& z,
                           const SimulationOptions& options) {
  const int T = inst.horizon();
  double work = 0.0;
  for (DriverIndex u = 0; u < inst.num_drivers(); ++u)
    work += static_cast<double>(removal_threshold(inst.driver(u).quota, options.removal) + 1) *
            static_cast<double>(inst.edges_of_driver(u).size() + 1);
  if (work * T > kExactWorkLimit) throw std::length_error("exact_evaluate: instance too large");

  ExactValues out;
  out.expected_matches.assign(inst.num_request_types(), 0.0);
  out.kappa.assign(inst.num_edges(), 0.0);
  out.availability.assign(inst.num_drivers() * T, 0.0);

  for (DriverIndex u = 0; u < inst.num_drivers(); ++u) {
    // Per-round probe probability pi_f = (r_v / T) z_f of each incident edge.
    double probe = 0.0, accept = 0.0;
    std::vector<double> pi;
    for (EdgeId f : inst.edges_of_driver(u)) {
      const Edge& e = inst.edge(f);
      const double p = inst.request_type(e.request_type).rate / T * z.prob(f);
      pi.push_back(p);
      probe += p;
      accept += p * e.accept_prob;
    }
    const int threshold = removal_threshold(inst.driver(u).quota, options.removal);
    // dist[c]: Pr[available at the start of the round with c cancellations].
    std::vector<double> dist(threshold, 0.0), next(threshold, 0.0);
    dist[0] = 1.0;
    for (int t = 1; t <= T; ++t) {
      double avail = 0.0;
      for (double d : dist) avail += d;
      out.availability[u * T + (t - 1)] = avail;
      const auto& eu = inst.edges_of_driver(u);
      for (std::size_t k = 0; k < eu.size(); ++k) {
        const Edge& e = inst.edge(eu[k]);
        out.kappa[eu[k]] += avail * pi[k];
        out.expected_matches[e.request_type] += avail * pi[k] * e.accept_prob;
        out.profit += avail * pi[k] * e.accept_prob * e.profit;
      }
      std::fill(next.begin(), next.end(), 0.0);
      for (int c = 0; c < threshold; ++c) {
        next[c] += dist[c] * (1.0 - probe);
        if (c + 1 < threshold) next[c + 1] += dist[c] * (probe - accept);
      }
      dist.swap(next);
    }
  }

  out.rate.resize(inst.num_request_types());
  out.fairness = inst.num_request_types() > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  for (RequestIndex v = 0; v < inst.num_request_types(); ++v) {
    out.rate[v] = out.expected_matches[v] / inst.request_type(v).rate;
    out.fairness = std::min(out.fairness, out.rate[v]);
  }
  return out;
}

double availability_lower_bound(int t, int horizon) {
  if (horizon < 1 || t < 1 || t > horizon)
    throw std::invalid_argument("availability_lower_bound needs 1 <= t <= T");
  const double T = horizon;
  return std::pow(1.0 - 1.0 / T, t - 1) * (1.0 - (t - 1) / T);
}

double kappa_bound_factor(int horizon) {
  double sum = 0.0;
  for (int t = 1; t <= horizon; ++t) sum += availability_lower_bound(t, horizon);
  return sum / horizon;
}

nlohmann::json estimates_to_json(const Estimates& est, std::optional<double> alpha,
                                 std::optional<double> beta, std::optional<int> delta,
                                 const CompetitiveRatios& ratios) {
  auto opt = [](const auto& v) -> nlohmann::json {
    if (v) return *v;
    return nullptr;
  };
  return {{"policy", est.policy},
          {"alpha", opt(alpha)},
          {"beta", opt(beta)},
          {"delta", opt(delta)},
          {"iterations", est.iterations},
          {"profit_mean", est.profit_mean},
          {"profit_se", est.profit_se},
          {"fairness", est.fairness},
          {"fairness_se", est.fairness_se},
          {"per_v_rates", est.rate_mean},
          {"ratios", {{"profit", opt(ratios.profit)}, {"fairness", opt(ratios.fairness)}}}};
}

}  // namespace fairmatch
