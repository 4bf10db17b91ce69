#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairmatch/instance.hpp"
#include "fairmatch/random.hpp"

namespace fairmatch {

// Either Assign(edge) or Reject. An assigned edge is always incident to the
// arriving request type.
struct Decision {
  std::optional<EdgeId> edge;

  static Decision reject() { return {}; }
  static Decision assign(EdgeId f) { return {f}; }
  bool assigns() const { return edge.has_value(); }
  friend bool operator==(const Decision&, const Decision&) = default;
};

// Read-only per-driver availability at the decision instant.
class AvailabilityView {
 public:
  explicit AvailabilityView(std::span<const std::uint8_t> flags) : flags_(flags) {}
  bool available(DriverIndex u) const { return flags_[u] != 0; }
  std::size_t size() const { return flags_.size(); }

 private:
  std::span<const std::uint8_t> flags_;
};

inline constexpr double kMassTolerance = 1e-12;

// Per-request-type sampling distribution over incident edges; the remaining
// mass 1 - sum_{f in E_v} z_f means reject.
class NonAdaptiveVector {
 public:
  struct Entry {
    EdgeId edge;
    DriverIndex driver;
    double prob;
  };

  // `z` is indexed by edge id. Throws std::invalid_argument if some z_f is
  // negative or a request type's mass exceeds 1 + kMassTolerance.
  NonAdaptiveVector(const Instance& inst, std::vector<double> z);

  std::size_t num_request_types() const { return by_request_.size(); }
  const std::vector<Entry>& entries(RequestIndex v) const { return by_request_[v]; }
  double mass(RequestIndex v) const;
  double prob(EdgeId f) const { return z_[f]; }
  const std::vector<double>& per_edge() const { return z_; }

 private:
  std::vector<double> z_;
  std::vector<std::vector<Entry>> by_request_;
};

// z_f = (alpha x*_f + beta y*_f) / r_v. Throws std::invalid_argument when
// alpha or beta is negative, alpha + beta > 1 + 1e-12, or either LP vector
// fails check_feasibility at 1e-7.
NonAdaptiveVector make_nadap(std::span<const double> x_star, std::span<const double> y_star,
                             double alpha, double beta, const Instance& inst);

// Uniform over E_v, as a non-adaptive vector (z_f = 1/|E_v|).
NonAdaptiveVector make_uniform_vector(const Instance& inst);

// One categorical draw: edge f with probability z_f, otherwise reject. The
// sampled edge is assigned only if its driver is available; no resampling.
Decision decide_nonadaptive(const NonAdaptiveVector& z, RequestIndex v,
                            const AvailabilityView& avail, Rng& rng);

// Highest p_f among available edges of v; ties go to the smallest driver id.
Decision decide_greedy(const Instance& inst, RequestIndex v, const AvailabilityView& avail);

// Uniform over all of E_v; assigns only if the sampled driver is available.
Decision decide_uniform(const Instance& inst, RequestIndex v, const AvailabilityView& avail,
                        Rng& rng);

// Decision rule consumed by the simulator. Implementations are stateless
// apart from immutable precomputation and safe to share between threads.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual Decision decide(RequestIndex v, const AvailabilityView& avail, Rng& rng) const = 0;
  virtual std::string name() const = 0;
};

class NonAdaptivePolicy final : public Policy {
 public:
  NonAdaptivePolicy(NonAdaptiveVector z, std::string name = "nadap")
      : z_(std::move(z)), name_(std::move(name)) {}
  Decision decide(RequestIndex v, const AvailabilityView& avail, Rng& rng) const override {
    return decide_nonadaptive(z_, v, avail, rng);
  }
  std::string name() const override { return name_; }
  const NonAdaptiveVector& vector() const { return z_; }

 private:
  NonAdaptiveVector z_;
  std::string name_;
};

class GreedyPolicy final : public Policy {
 public:
  explicit GreedyPolicy(const Instance& inst);
  Decision decide(RequestIndex v, const AvailabilityView& avail, Rng& rng) const override;
  std::string name() const override { return "greedy"; }

 private:
  const Instance* inst_;
  std::vector<std::vector<EdgeId>> ranked_;  // E_v by (p desc, driver id asc)
};

class UniformPolicy final : public Policy {
 public:
  explicit UniformPolicy(const Instance& inst) : inst_(&inst) {}
  Decision decide(RequestIndex v, const AvailabilityView& avail, Rng& rng) const override {
    return decide_uniform(*inst_, v, avail, rng);
  }
  std::string name() const override { return "uniform"; }

 private:
  const Instance* inst_;
};

}  // namespace fairmatch
