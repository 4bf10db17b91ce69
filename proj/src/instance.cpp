#include "fairmatch/instance.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace fairmatch {

Instance::Instance(std::vector<Driver> drivers, std::vector<RequestType> request_types,
                   std::vector<Edge> edges, int horizon)
    : drivers_(std::move(drivers)),
      request_types_(std::move(request_types)),
      edges_(std::move(edges)),
      horizon_(horizon),
      by_driver_(drivers_.size()),
      by_request_(request_types_.size()) {
  for (EdgeId f = 0; f < edges_.size(); ++f) {
    const Edge& e = edges_[f];
    if (e.driver >= drivers_.size() || e.request_type >= request_types_.size()) continue;
    by_driver_[e.driver].push_back(f);
    by_request_[e.request_type].push_back(f);
  }
}

Instance Instance::with_uniform_quota(int quota) const {
  std::vector<Driver> drivers = drivers_;
  for (Driver& d : drivers) d.quota = quota;
  return Instance(std::move(drivers), request_types_, edges_, horizon_);
}

std::optional<DriverIndex> Instance::find_driver(const std::string& id) const {
  for (DriverIndex u = 0; u < drivers_.size(); ++u)
    if (drivers_[u].id == id) return u;
  return std::nullopt;
}

std::optional<RequestIndex> Instance::find_request_type(const std::string& id) const {
  for (RequestIndex v = 0; v < request_types_.size(); ++v)
    if (request_types_[v].id == id) return v;
  return std::nullopt;
}

bool ValidationReport::has(ViolationKind kind) const {
  for (const Violation& v : violations)
    if (v.kind == kind) return true;
  return false;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const Violation& v : violations) os << "error: " << v.entity << ": " << v.message << '\n';
  for (const std::string& w : warnings) os << "warning: " << w << '\n';
  return os.str();
}

namespace {

std::string edge_label(const Instance& inst, EdgeId f) {
  const Edge& e = inst.edge(f);
  std::ostringstream os;
  os << "edge " << f << " (";
  os << (e.driver < inst.num_drivers() ? inst.driver(e.driver).id : "?") << ", ";
  os << (e.request_type < inst.num_request_types() ? inst.request_type(e.request_type).id : "?");
  os << ")";
  return os.str();
}

}  // namespace

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  auto add = [&](ViolationKind k, std::string entity, std::string msg) {
    report.violations.push_back({k, std::move(entity), std::move(msg)});
  };

  if (inst.horizon() <= 0) add(ViolationKind::NonPositiveHorizon, "horizon", "T must be positive");

  std::set<std::string> driver_ids;
  for (const Driver& d : inst.drivers()) {
    if (!driver_ids.insert(d.id).second)
      add(ViolationKind::DuplicateId, "driver " + d.id, "duplicate driver id");
    if (d.quota < 1) add(ViolationKind::NonPositiveQuota, "driver " + d.id, "quota must be >= 1");
  }

  std::set<std::string> request_ids;
  double rate_sum = 0.0;
  for (const RequestType& r : inst.request_types()) {
    if (!request_ids.insert(r.id).second)
      add(ViolationKind::DuplicateId, "request " + r.id, "duplicate request type id");
    if (!std::isfinite(r.rate))
      add(ViolationKind::NonFiniteValue, "request " + r.id, "rate is not finite");
    else if (r.rate <= 0.0)
      add(ViolationKind::NonPositiveRate, "request " + r.id, "rate must be > 0");
    rate_sum += r.rate;
  }
  if (std::abs(rate_sum - inst.horizon()) > kRateSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "rates != T: sum of rates " << rate_sum << " vs horizon " << inst.horizon();
    add(ViolationKind::RateSumMismatch, "request_types", os.str());
  }

  std::set<std::pair<DriverIndex, RequestIndex>> pairs;
  for (EdgeId f = 0; f < inst.num_edges(); ++f) {
    const Edge& e = inst.edge(f);
    const std::string label = edge_label(inst, f);
    if (e.driver >= inst.num_drivers() || e.request_type >= inst.num_request_types()) {
      add(ViolationKind::DanglingEdge, label, "edge references a missing driver or request type");
      continue;
    }
    if (!pairs.insert({e.driver, e.request_type}).second)
      add(ViolationKind::DuplicateEdge, label, "duplicate (driver, request type) pair");
    if (!std::isfinite(e.accept_prob) || !std::isfinite(e.profit)) {
      add(ViolationKind::NonFiniteValue, label, "p or w is not finite");
      continue;
    }
    if (!(e.accept_prob > 0.0 && e.accept_prob <= 1.0))
      add(ViolationKind::AcceptProbOutOfRange, label, "p_f out of (0,1]");
    if (e.profit < 0.0) add(ViolationKind::NegativeProfit, label, "w_f must be >= 0");
  }

  for (RequestIndex v = 0; v < inst.num_request_types(); ++v)
    if (inst.edges_of_request(v).empty())
      report.warnings.push_back("request " + inst.request_type(v).id +
                                " has no incident edges; fairness optimum is 0");
  return report;
}

Instance build_star_instance(int K, double eps, std::optional<int> horizon_override) {
  if (K < 1) throw std::invalid_argument("star instance needs K >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("star instance needs eps in (0,1)");
  if (horizon_override && *horizon_override < 1)
    throw std::invalid_argument("star horizon override must be positive");

  const int horizon = horizon_override.value_or(K + 1);
  const double rate = static_cast<double>(horizon) / (K + 1);

  std::vector<Driver> drivers{{"u", 1, std::nullopt}};
  std::vector<RequestType> requests;
  std::vector<Edge> edges;
  for (int j = 0; j <= K; ++j) {
    requests.push_back({"v" + std::to_string(j), rate, std::nullopt});
    edges.push_back({0, static_cast<RequestIndex>(j), j == 0 ? 1.0 : eps, 1.0});
  }
  return Instance(std::move(drivers), std::move(requests), std::move(edges), horizon);
}

}  // namespace fairmatch
