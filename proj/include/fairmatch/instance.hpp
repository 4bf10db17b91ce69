#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fairmatch {

using EdgeId = std::size_t;
using DriverIndex = std::size_t;
using RequestIndex = std::size_t;

struct Driver {
  std::string id;
  int quota = 1;  // cancellations tolerated before deactivation
  std::optional<std::string> group;
};

struct RequestType {
  std::string id;
  double rate = 1.0;  // expected arrivals over the horizon
  std::optional<std::string> group;
};

struct Edge {
  DriverIndex driver = 0;
  RequestIndex request_type = 0;
  double accept_prob = 1.0;
  double profit = 0.0;
};

// Bipartite driver / request-type graph with KIID arrivals over `horizon`
// rounds. Immutable once built; adjacency lists are derived at construction.
class Instance {
 public:
  Instance() = default;
  Instance(std::vector<Driver> drivers, std::vector<RequestType> request_types,
           std::vector<Edge> edges, int horizon);

  const std::vector<Driver>& drivers() const { return drivers_; }
  const std::vector<RequestType>& request_types() const { return request_types_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int horizon() const { return horizon_; }

  std::size_t num_drivers() const { return drivers_.size(); }
  std::size_t num_request_types() const { return request_types_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const Edge& edge(EdgeId f) const { return edges_[f]; }
  const Driver& driver(DriverIndex u) const { return drivers_[u]; }
  const RequestType& request_type(RequestIndex v) const { return request_types_[v]; }

  // E_u and E_v, in ascending edge id order. Edges with dangling endpoints
  // are left out of both (validate_instance reports them).
  const std::vector<EdgeId>& edges_of_driver(DriverIndex u) const { return by_driver_[u]; }
  const std::vector<EdgeId>& edges_of_request(RequestIndex v) const { return by_request_[v]; }

  // Same graph with every quota replaced by `quota`.
  Instance with_uniform_quota(int quota) const;

  std::optional<DriverIndex> find_driver(const std::string& id) const;
  std::optional<RequestIndex> find_request_type(const std::string& id) const;

 private:
  std::vector<Driver> drivers_;
  std::vector<RequestType> request_types_;
  std::vector<Edge> edges_;
  int horizon_ = 0;
  std::vector<std::vector<EdgeId>> by_driver_;
  std::vector<std::vector<EdgeId>> by_request_;
};

enum class ViolationKind {
  NonPositiveHorizon,
  RateSumMismatch,
  NonPositiveRate,
  NonPositiveQuota,
  AcceptProbOutOfRange,
  NegativeProfit,
  NonFiniteValue,
  DanglingEdge,
  DuplicateEdge,
  DuplicateId,
  // Feasibility of a fractional solution against the benchmark constraints.
  DriverCapacity,
  DriverProbeQuota,
  ArrivalRate,
  NegativeValue,
  WrongLength,
};

struct Violation {
  ViolationKind kind;
  std::string entity;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
  std::string to_string() const;
};

inline constexpr double kRateSumTolerance = 1e-9;

ValidationReport validate_instance(const Instance& inst);

// Star hardness graph: one driver with quota 1 and request types v0..vK.
// v0 is accepted surely, the others with probability `eps`; every profit is 1.
// The horizon defaults to K+1 (unit rates); an override rescales all rates to
// horizon/(K+1). Throws std::invalid_argument on K = 0 or eps outside (0,1).
Instance build_star_instance(int K, double eps, std::optional<int> horizon_override = {});

}  // namespace fairmatch
