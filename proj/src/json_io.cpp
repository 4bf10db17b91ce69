#include "fairmatch/json_io.hpp"

#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace fairmatch {

using nlohmann::json;

json instance_to_json(const Instance& inst) {
  json drivers = json::array();
  for (const Driver& d : inst.drivers()) {
    json jd = {{"id", d.id}, {"quota", d.quota}};
    if (d.group) jd["group"] = *d.group;
    drivers.push_back(std::move(jd));
  }
  json requests = json::array();
  for (const RequestType& r : inst.request_types()) {
    json jr = {{"id", r.id}, {"rate", r.rate}};
    if (r.group) jr["group"] = *r.group;
    requests.push_back(std::move(jr));
  }
  json edges = json::array();
  for (const Edge& e : inst.edges()) {
    edges.push_back({{"u", inst.driver(e.driver).id},
                     {"v", inst.request_type(e.request_type).id},
                     {"p", e.accept_prob},
                     {"w", e.profit}});
  }
  return {{"drivers", std::move(drivers)},
          {"request_types", std::move(requests)},
          {"edges", std::move(edges)},
          {"horizon", inst.horizon()}};
}

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw std::runtime_error(std::string("instance JSON: missing key '") + key + "'");
  return j.at(key);
}

std::optional<std::string> optional_group(const json& j) {
  if (j.contains("group") && !j.at("group").is_null()) return j.at("group").get<std::string>();
  return std::nullopt;
}

}  // namespace

Instance instance_from_json(const json& j) {
  std::vector<Driver> drivers;
  std::unordered_map<std::string, DriverIndex> driver_index;
  for (const json& jd : require(j, "drivers")) {
    Driver d{require(jd, "id").get<std::string>(), require(jd, "quota").get<int>(),
             optional_group(jd)};
    driver_index.emplace(d.id, drivers.size());
    drivers.push_back(std::move(d));
  }

  std::vector<RequestType> requests;
  std::unordered_map<std::string, RequestIndex> request_index;
  for (const json& jr : require(j, "request_types")) {
    RequestType r{require(jr, "id").get<std::string>(), require(jr, "rate").get<double>(),
                  optional_group(jr)};
    request_index.emplace(r.id, requests.size());
    requests.push_back(std::move(r));
  }

  std::vector<Edge> edges;
  for (const json& je : require(j, "edges")) {
    const auto u = require(je, "u").get<std::string>();
    const auto v = require(je, "v").get<std::string>();
    const auto du = driver_index.find(u);
    const auto rv = request_index.find(v);
    if (du == driver_index.end()) throw std::runtime_error("instance JSON: unknown driver '" + u + "'");
    if (rv == request_index.end())
      throw std::runtime_error("instance JSON: unknown request type '" + v + "'");
    edges.push_back({du->second, rv->second, require(je, "p").get<double>(),
                     require(je, "w").get<double>()});
  }

  return Instance(std::move(drivers), std::move(requests), std::move(edges),
                  require(j, "horizon").get<int>());
}

void write_json_file(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

Instance load_instance(const std::filesystem::path& path) {
  return instance_from_json(read_json_file(path));
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  write_json_file(instance_to_json(inst), path);
}

}  // namespace fairmatch
