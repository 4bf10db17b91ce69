#include "fairmatch/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "fairmatch/random.hpp"

namespace fairmatch {

// Absorbs representation error so that e.g. 40.45 lands in row 1, not row 0.
constexpr double kBinNudge = 1e-9;

int GridSpec::columns() const { return static_cast<int>(std::lround((lon_max - lon_min) / step)); }
int GridSpec::rows() const { return static_cast<int>(std::lround((lat_max - lat_min) / step)); }

void GridSpec::validate() const {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(lon_min < lon_max && lat_min < lat_max)) throw std::invalid_argument("grid bounds unordered");
}

std::optional<int> bin_location(double lat, double lon, const GridSpec& grid) {
  if (!std::isfinite(lat) || !std::isfinite(lon)) return std::nullopt;
  if (lat < grid.lat_min || lat >= grid.lat_max || lon < grid.lon_min || lon >= grid.lon_max)
    return std::nullopt;
  const int row = std::min(grid.rows() - 1,
                           static_cast<int>(std::floor((lat - grid.lat_min) / grid.step + kBinNudge)));
  const int col = std::min(grid.columns() - 1,
                           static_cast<int>(std::floor((lon - grid.lon_min) / grid.step + kBinNudge)));
  return row * grid.columns() + col;
}

const char* to_string(Group g) { return g == Group::Advantaged ? "advantaged" : "disadvantaged"; }

Group parse_group(const std::string& label) {
  if (label == "advantaged") return Group::Advantaged;
  if (label == "disadvantaged") return Group::Disadvantaged;
  throw std::invalid_argument("unknown group label '" + label + "'");
}

void DemographicParams::validate() const {
  for (double r : {rider_disadvantaged, rider_advantaged, driver_disadvantaged, driver_advantaged})
    if (!(r > 0.0)) throw std::invalid_argument("group ratios must be positive");
  for (double p : {p_adv_adv, p_dis_dis, p_other})
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("base probabilities must be in (0,1]");
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw std::invalid_argument("kappa must be in [0,1]");
}

double assign_accept_prob(Group driver, Group rider, const DemographicParams& demo) {
  double base = demo.p_other;
  if (driver == Group::Advantaged && rider == Group::Advantaged) base = demo.p_adv_adv;
  if (driver == Group::Disadvantaged && rider == Group::Disadvantaged) base = demo.p_dis_dis;
  return demo.kappa + (1.0 - demo.kappa) * base;
}

double assign_accept_prob(const std::string& driver_group, const std::string& rider_group,
                          const DemographicParams& demo) {
  return assign_accept_prob(parse_group(driver_group), parse_group(rider_group), demo);
}

void SyntheticParams::validate() const {
  if (num_drivers < 1 || num_request_types < 1 || horizon < 1 || quota < 1)
    throw std::invalid_argument("synthetic sizes and quota must be positive");
  if (horizon < num_request_types)
    throw std::invalid_argument("synthetic horizon must be >= number of request types");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw std::invalid_argument("edge_prob not in [0,1]");
  if (!(0.0 <= p_lo && p_lo <= p_hi && p_hi <= 1.0) || p_hi <= 0.0)
    throw std::invalid_argument("p range must lie in [0,1] with p_hi > 0");
  if (!(0.0 <= w_lo && w_lo <= w_hi && w_hi <= 1.0))
    throw std::invalid_argument("w range must lie in [0,1]");
}

Instance generate_synthetic(const SyntheticParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(params.num_request_types);

  std::vector<int> counts(n, 0);
  for (int i = 0; i < params.horizon; ++i) ++counts[rng.index(n)];
  for (std::size_t v = 0; v < n; ++v) {
    if (counts[v] > 0) continue;
    const auto largest = std::max_element(counts.begin(), counts.end());
    --*largest;
    counts[v] = 1;
  }

  std::vector<Driver> drivers;
  for (int u = 0; u < params.num_drivers; ++u)
    drivers.push_back({"d" + std::to_string(u), params.quota, std::nullopt});
  std::vector<RequestType> requests;
  for (std::size_t v = 0; v < n; ++v)
    requests.push_back({"r" + std::to_string(v), static_cast<double>(counts[v]), std::nullopt});

  std::vector<Edge> edges;
  for (int u = 0; u < params.num_drivers; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (!(rng.uniform() < params.edge_prob)) continue;
      double p;
      do {
        p = rng.uniform(params.p_lo, params.p_hi);
      } while (p <= 0.0);
      const double w = rng.uniform(params.w_lo, params.w_hi);
      edges.push_back({static_cast<DriverIndex>(u), v, p, w});
    }
  }
  return Instance(std::move(drivers), std::move(requests), std::move(edges), params.horizon);
}

nlohmann::json IngestReport::to_json() const {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [bin, count] : pickup_bin_histogram) hist[std::to_string(bin)] = count;
  return {{"records_in", records_in},
          {"malformed_rows", malformed_rows},
          {"out_of_grid", out_of_grid},
          {"outside_hour", outside_hour},
          {"records_used", records_used},
          {"drivers_seen", drivers_seen},
          {"driver_types_total", driver_types_total},
          {"request_types_total", request_types_total},
          {"pickup_bin_histogram", hist},
          {"warnings", warnings}};
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t content_key(std::uint64_t seed, const std::string& content) {
  return mix64(seed ^ fnv1a(content));
}

// Labels the first round(n * share) items of the keyed order as
// disadvantaged; the rest advantaged.
template <class Item>
void assign_groups(std::vector<std::pair<std::uint64_t, Item>>& keyed, double disadvantaged_share,
                   std::vector<Group>& out, auto index_of) {
  std::sort(keyed.begin(), keyed.end());
  const auto cut = static_cast<std::size_t>(std::llround(keyed.size() * disadvantaged_share));
  for (std::size_t i = 0; i < keyed.size(); ++i)
    out[index_of(keyed[i].second)] = i < cut ? Group::Disadvantaged : Group::Advantaged;
}

char group_code(Group g) { return g == Group::Advantaged ? 'A' : 'D'; }

std::optional<int> pickup_hour_of(const std::string& datetime) {
  // "YYYY-MM-DD HH:MM:SS" or ISO "YYYY-MM-DDTHH:MM:SS".
  if (datetime.size() < 13) return std::nullopt;
  int hour = 0;
  const auto res = std::from_chars(datetime.data() + 11, datetime.data() + 13, hour);
  if (res.ec != std::errc{} || hour < 0 || hour > 23) return std::nullopt;
  return hour;
}

struct DriverType {
  int bin;
  Group group;
  auto operator<=>(const DriverType&) const = default;
  std::string id() const { return "d" + std::to_string(bin) + "-" + group_code(group); }
};

struct RequestKey {
  int start;
  int end;
  Group group;
  auto operator<=>(const RequestKey&) const = default;
  std::string id() const {
    return "r" + std::to_string(start) + "-" + std::to_string(end) + "-" + group_code(group);
  }
};

}  // namespace

IngestResult ingest_trips(std::span<const TripRecord> records, const IngestParams& params) {
  params.grid.validate();
  params.demo.validate();
  if (params.quota < 1) throw std::invalid_argument("quota must be >= 1");

  IngestReport report;
  report.records_in = records.size();

  struct Usable {
    const TripRecord* rec;
    int start, end;
  };
  std::vector<Usable> usable;
  for (const TripRecord& r : records) {
    if (params.pickup_hour) {
      const auto hour = pickup_hour_of(r.pickup_datetime);
      if (!hour || *hour != *params.pickup_hour) {
        ++report.outside_hour;
        continue;
      }
    }
    const auto start = bin_location(r.pickup_lat, r.pickup_lon, params.grid);
    const auto end = bin_location(r.dropoff_lat, r.dropoff_lon, params.grid);
    if (!start || !end) {
      ++report.out_of_grid;
      continue;
    }
    usable.push_back({&r, *start, *end});
    ++report.pickup_bin_histogram[*start];
  }
  report.records_used = usable.size();
  if (usable.empty()) throw std::runtime_error("ingest: no usable trip records");

  const DemographicParams& demo = params.demo;
  const std::uint64_t seed = params.seed;

  // Driver groups, keyed on the driver hash.
  std::vector<std::string> hashes;
  for (const Usable& u : usable) hashes.push_back(u.rec->driver_hash);
  std::sort(hashes.begin(), hashes.end());
  hashes.erase(std::unique(hashes.begin(), hashes.end()), hashes.end());
  report.drivers_seen = hashes.size();
  std::vector<Group> driver_group(hashes.size());
  {
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
    for (std::size_t i = 0; i < hashes.size(); ++i)
      keyed.emplace_back(content_key(seed, "driver:" + hashes[i]), i);
    assign_groups(keyed,
                  demo.driver_disadvantaged / (demo.driver_disadvantaged + demo.driver_advantaged),
                  driver_group, [](std::size_t i) { return i; });
  }
  auto group_of_driver = [&](const std::string& h) {
    return driver_group[std::lower_bound(hashes.begin(), hashes.end(), h) - hashes.begin()];
  };

  // Rider groups, keyed on the full record content.
  std::vector<std::string> contents;
  for (const Usable& u : usable) {
    const TripRecord& r = *u.rec;
    contents.push_back(r.driver_hash + '|' + r.pickup_datetime + '|' + num(r.pickup_lat) + '|' +
                       num(r.pickup_lon) + '|' + num(r.dropoff_lat) + '|' + num(r.dropoff_lon) +
                       '|' + num(r.distance));
  }
  std::vector<Group> rider_group(usable.size());
  {
    // Identical rows share a key and fall back to position, which only
    // permutes labels among interchangeable rows.
    std::vector<std::pair<std::uint64_t, std::pair<std::string, std::size_t>>> keyed;
    for (std::size_t i = 0; i < usable.size(); ++i)
      keyed.push_back({content_key(seed, "trip:" + contents[i]), {contents[i], i}});
    assign_groups(keyed,
                  demo.rider_disadvantaged / (demo.rider_disadvantaged + demo.rider_advantaged),
                  rider_group, [](const auto& p) { return p.second; });
  }

  // Type aggregation.
  std::set<DriverType> driver_types;
  struct RequestAgg {
    double distance_sum = 0.0;
    std::size_t trips = 0;
  };
  std::map<RequestKey, RequestAgg> request_types;
  for (std::size_t i = 0; i < usable.size(); ++i) {
    const Usable& u = usable[i];
    driver_types.insert({u.start, group_of_driver(u.rec->driver_hash)});
    RequestAgg& agg = request_types[{u.start, u.end, rider_group[i]}];
    agg.distance_sum += u.rec->distance;
    ++agg.trips;
  }
  report.driver_types_total = driver_types.size();
  report.request_types_total = request_types.size();

  // Downsample drivers uniformly without replacement (keyed order).
  std::vector<std::pair<std::uint64_t, DriverType>> driver_order;
  for (const DriverType& d : driver_types)
    driver_order.emplace_back(content_key(seed, "dtype:" + d.id()), d);
  std::sort(driver_order.begin(), driver_order.end());
  if (driver_order.size() > params.target_drivers) driver_order.resize(params.target_drivers);
  std::vector<DriverType> kept_drivers;
  std::set<int> covered_bins;
  for (const auto& [key, d] : driver_order) {
    kept_drivers.push_back(d);
    covered_bins.insert(d.bin);
  }
  std::sort(kept_drivers.begin(), kept_drivers.end());

  // Requests: prefer types whose start bin has a kept driver.
  std::vector<std::pair<std::uint64_t, RequestKey>> covered, uncovered;
  for (const auto& [k, agg] : request_types) {
    auto& bucket = covered_bins.count(k.start) ? covered : uncovered;
    bucket.emplace_back(content_key(seed, "rtype:" + k.id()), k);
  }
  std::sort(covered.begin(), covered.end());
  std::sort(uncovered.begin(), uncovered.end());
  std::vector<RequestKey> kept_requests;
  for (const auto& [key, k] : covered) {
    if (kept_requests.size() == params.target_requests) break;
    kept_requests.push_back(k);
  }
  for (const auto& [key, k] : uncovered) {
    if (kept_requests.size() == params.target_requests) break;
    kept_requests.push_back(k);
    report.warnings.push_back("request type " + k.id() + " has no feasible driver type");
  }
  std::sort(kept_requests.begin(), kept_requests.end());

  // Rates: N(mean, sd) keyed per type, rounded to a positive integer.
  std::vector<RequestType> requests;
  int horizon = 0;
  double max_distance = 0.0;
  std::vector<double> mean_distance;
  for (const RequestKey& k : kept_requests) {
    Rng rng(content_key(seed, "rate:" + k.id()));
    const long rate = std::max(1L, std::lround(rng.normal(params.rate_mean, params.rate_sd)));
    horizon += static_cast<int>(rate);
    requests.push_back({k.id(), static_cast<double>(rate), std::string(to_string(k.group))});
    const RequestAgg& agg = request_types.at(k);
    mean_distance.push_back(agg.distance_sum / static_cast<double>(agg.trips));
    max_distance = std::max(max_distance, mean_distance.back());
  }

  std::vector<Driver> drivers;
  for (const DriverType& d : kept_drivers)
    drivers.push_back({d.id(), params.quota, std::string(to_string(d.group))});

  std::vector<Edge> edges;
  for (RequestIndex v = 0; v < kept_requests.size(); ++v) {
    const RequestKey& k = kept_requests[v];
    const double w = max_distance > 0.0 ? mean_distance[v] / max_distance : 0.0;
    for (DriverIndex u = 0; u < kept_drivers.size(); ++u) {
      if (kept_drivers[u].bin != k.start) continue;
      edges.push_back({u, v, assign_accept_prob(kept_drivers[u].group, k.group, demo), w});
    }
  }

  return {Instance(std::move(drivers), std::move(requests), std::move(edges), horizon),
          std::move(report)};
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  for (std::string& f : fields) {
    const auto b = f.find_first_not_of(' ');
    const auto e = f.find_last_not_of(' ');
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

CsvTrips read_trips_csv(std::istream& in) {
  CsvTrips out;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trips CSV: empty input");
  const auto header = split_csv_line(line);
  auto column = [&](const char* name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::runtime_error(std::string("trips CSV: missing column ") + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_driver = column("driver_hash");
  const std::size_t c_pick_t = column("pickup_datetime");
  column("dropoff_datetime");
  const std::size_t c_pick_lon = column("pickup_lon");
  const std::size_t c_pick_lat = column("pickup_lat");
  const std::size_t c_drop_lon = column("dropoff_lon");
  const std::size_t c_drop_lat = column("dropoff_lat");
  const std::size_t c_dist = column("trip_distance");
  const std::size_t needed =
      1 + std::max({c_driver, c_pick_t, c_pick_lon, c_pick_lat, c_drop_lon, c_drop_lat, c_dist});

  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++out.rows;
    const auto f = split_csv_line(line);
    TripRecord r;
    bool ok = f.size() >= needed && !f[c_driver].empty() &&
              parse_double(f[c_pick_lat], r.pickup_lat) &&
              parse_double(f[c_pick_lon], r.pickup_lon) &&
              parse_double(f[c_drop_lat], r.dropoff_lat) &&
              parse_double(f[c_drop_lon], r.dropoff_lon) && parse_double(f[c_dist], r.distance) &&
              r.distance >= 0.0;
    if (!ok) {
      ++out.malformed;
      continue;
    }
    r.driver_hash = f[c_driver];
    r.pickup_datetime = f[c_pick_t];
    out.records.push_back(std::move(r));
  }
  return out;
}

}  // namespace fairmatch
