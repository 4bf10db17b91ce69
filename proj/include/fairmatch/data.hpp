#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairmatch/instance.hpp"
#include "json.hpp"

namespace fairmatch {

// Row-major lon/lat grid; cells are half-open [min, min + step).
struct GridSpec {
  double lon_min = -75.0;
  double lon_max = -73.0;
  double lat_min = 40.4;
  double lat_max = 40.95;
  double step = 0.05;

  int columns() const;  // longitude cells
  int rows() const;     // latitude cells
  int num_bins() const { return rows() * columns(); }
  void validate() const;
};

// Cell index row * columns + column, or nullopt outside the grid.
std::optional<int> bin_location(double lat, double lon, const GridSpec& grid);

struct TripRecord {
  std::string driver_hash;
  std::string pickup_datetime;
  double pickup_lat = 0.0;
  double pickup_lon = 0.0;
  double dropoff_lat = 0.0;
  double dropoff_lon = 0.0;
  double distance = 0.0;  // miles
};

enum class Group { Advantaged, Disadvantaged };

const char* to_string(Group g);
Group parse_group(const std::string& label);  // "advantaged" | "disadvantaged"

struct DemographicParams {
  // Ratios disadvantaged : advantaged.
  double rider_disadvantaged = 1.0;
  double rider_advantaged = 2.0;
  double driver_disadvantaged = 3.0;
  double driver_advantaged = 1.0;
  // Base acceptance probabilities by (driver, rider) group.
  double p_adv_adv = 0.6;
  double p_dis_dis = 0.3;
  double p_other = 0.1;
  double kappa = 0.5;

  void validate() const;
};

// Base probability for the group pair, lifted to kappa + (1 - kappa) p.
double assign_accept_prob(Group driver, Group rider, const DemographicParams& demo);
// Label overload; throws std::invalid_argument on unknown labels.
double assign_accept_prob(const std::string& driver_group, const std::string& rider_group,
                          const DemographicParams& demo);

struct SyntheticParams {
  int num_drivers = 100;
  int num_request_types = 50;
  int horizon = 700;
  double edge_prob = 0.1;
  double p_lo = 0.5, p_hi = 1.0;
  double w_lo = 0.0, w_hi = 1.0;
  int quota = 1;

  void validate() const;
};

// Rates ~ Multinomial(T, uniform over request types); a type that draws 0 is
// set to 1 and the largest rate (lowest index on ties) gives up one. Each
// (u, v) pair is an edge with probability edge_prob, with p and w uniform in
// their ranges.
Instance generate_synthetic(const SyntheticParams& params, std::uint64_t seed);

struct IngestParams {
  GridSpec grid;
  DemographicParams demo;
  std::size_t target_drivers = 48;
  std::size_t target_requests = 24;
  double rate_mean = 15.0;
  double rate_sd = 1.0;
  int quota = 1;
  std::uint64_t seed = 0;
  std::optional<int> pickup_hour;  // keep only trips starting in this hour
};

struct IngestReport {
  std::size_t records_in = 0;
  std::size_t malformed_rows = 0;
  std::size_t out_of_grid = 0;
  std::size_t outside_hour = 0;
  std::size_t records_used = 0;
  std::size_t drivers_seen = 0;
  std::size_t driver_types_total = 0;
  std::size_t request_types_total = 0;
  std::map<int, std::size_t> pickup_bin_histogram;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

struct IngestResult {
  Instance instance;
  IngestReport report;
};

// Driver type = (pickup bin, driver group); request type = (pickup bin,
// dropoff bin, rider group); edge iff the request starts in the driver's bin.
// All randomness (group labels, downsampling, rates) is keyed on record and
// type content rather than position, so record order does not matter.
// Throws std::runtime_error when no usable record remains.
IngestResult ingest_trips(std::span<const TripRecord> records, const IngestParams& params);

struct CsvTrips {
  std::vector<TripRecord> records;
  std::size_t rows = 0;
  std::size_t malformed = 0;
};

// Header row naming at least driver_hash, pickup_datetime, dropoff_datetime,
// pickup_lon, pickup_lat, dropoff_lon, dropoff_lat, trip_distance (any order,
// extra columns ignored). Rows that do not parse are skipped and counted.
// Throws std::runtime_error on a missing column.
CsvTrips read_trips_csv(std::istream& in);

}  // namespace fairmatch
