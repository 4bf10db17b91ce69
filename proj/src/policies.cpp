#include "fairmatch/policies.hpp"

#include <algorithm>
#include <stdexcept>

#include "fairmatch/lp.hpp"

namespace fairmatch {

NonAdaptiveVector::NonAdaptiveVector(const Instance& inst, std::vector<double> z)
    : z_(std::move(z)), by_request_(inst.num_request_types()) {
  if (z_.size() != inst.num_edges())
    throw std::invalid_argument("non-adaptive vector: one entry per edge required");
  for (RequestIndex v = 0; v < inst.num_request_types(); ++v) {
    double total = 0.0;
    for (EdgeId f : inst.edges_of_request(v)) {
      if (!(z_[f] >= 0.0)) throw std::invalid_argument("non-adaptive vector: negative z_f");
      total += z_[f];
      if (z_[f] > 0.0) by_request_[v].push_back({f, inst.edge(f).driver, z_[f]});
    }
    if (total > 1.0 + kMassTolerance)
      throw std::invalid_argument("non-adaptive vector: mass of request " +
                                  inst.request_type(v).id + " exceeds 1");
  }
}

double NonAdaptiveVector::mass(RequestIndex v) const {
  double total = 0.0;
  for (const Entry& e : by_request_[v]) total += e.prob;
  return total;
}

NonAdaptiveVector make_nadap(std::span<const double> x_star, std::span<const double> y_star,
                             double alpha, double beta, const Instance& inst) {
  if (alpha < 0.0 || beta < 0.0) throw std::invalid_argument("NAdap: alpha, beta must be >= 0");
  if (alpha + beta > 1.0 + kMassTolerance)
    throw std::invalid_argument("NAdap: alpha + beta must be <= 1");
  if (!check_feasibility(inst, x_star, kReportTolerance).ok())
    throw std::invalid_argument("NAdap: profit LP solution is infeasible");
  if (!check_feasibility(inst, y_star, kReportTolerance).ok())
    throw std::invalid_argument("NAdap: fairness LP solution is infeasible");

  std::vector<double> z(inst.num_edges(), 0.0);
  for (RequestIndex v = 0; v < inst.num_request_types(); ++v) {
    const double rate = inst.request_type(v).rate;
    double total = 0.0;
    for (EdgeId f : inst.edges_of_request(v)) {
      z[f] = std::max(0.0, alpha * x_star[f] + beta * y_star[f]) / rate;
      total += z[f];
    }
    // The arrival row can be tight up to the 1e-7 feasibility slack.
    if (total > 1.0)
      for (EdgeId f : inst.edges_of_request(v)) z[f] /= total;
  }
  return NonAdaptiveVector(inst, std::move(z));
}

NonAdaptiveVector make_uniform_vector(const Instance& inst) {
  std::vector<double> z(inst.num_edges(), 0.0);
  for (RequestIndex v = 0; v < inst.num_request_types(); ++v) {
    const auto& ev = inst.edges_of_request(v);
    for (EdgeId f : ev) z[f] = 1.0 / static_cast<double>(ev.size());
  }
  return NonAdaptiveVector(inst, std::move(z));
}

Decision decide_nonadaptive(const NonAdaptiveVector& z, RequestIndex v,
                            const AvailabilityView& avail, Rng& rng) {
  const double draw = rng.uniform();
  double cumulative = 0.0;
  for (const auto& e : z.entries(v)) {
    cumulative += e.prob;
    if (draw < cumulative)
      return avail.available(e.driver) ? Decision::assign(e.edge) : Decision::reject();
  }
  return Decision::reject();
}

Decision decide_greedy(const Instance& inst, RequestIndex v, const AvailabilityView& avail) {
  std::optional<EdgeId> best;
  for (EdgeId f : inst.edges_of_request(v)) {
    const Edge& e = inst.edge(f);
    if (!avail.available(e.driver)) continue;
    if (!best) {
      best = f;
      continue;
    }
    const Edge& b = inst.edge(*best);
    if (e.accept_prob > b.accept_prob ||
        (e.accept_prob == b.accept_prob && inst.driver(e.driver).id < inst.driver(b.driver).id))
      best = f;
  }
  return best ? Decision::assign(*best) : Decision::reject();
}

Decision decide_uniform(const Instance& inst, RequestIndex v, const AvailabilityView& avail,
                        Rng& rng) {
  const auto& ev = inst.edges_of_request(v);
  if (ev.empty()) return Decision::reject();
  const EdgeId f = ev[rng.index(ev.size())];
  return avail.available(inst.edge(f).driver) ? Decision::assign(f) : Decision::reject();
}

GreedyPolicy::GreedyPolicy(const Instance& inst) : inst_(&inst), ranked_(inst.num_request_types()) {
  for (RequestIndex v = 0; v < inst.num_request_types(); ++v) {
    auto& order = ranked_[v];
    order = inst.edges_of_request(v);
    std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
      const Edge& ea = inst.edge(a);
      const Edge& eb = inst.edge(b);
      if (ea.accept_prob != eb.accept_prob) return ea.accept_prob > eb.accept_prob;
      return inst.driver(ea.driver).id < inst.driver(eb.driver).id;
    });
  }
}

Decision GreedyPolicy::decide(RequestIndex v, const AvailabilityView& avail, Rng&) const {
  for (EdgeId f : ranked_[v])
    if (avail.available(inst_->edge(f).driver)) return Decision::assign(f);
  return Decision::reject();
}

}  // namespace fairmatch
