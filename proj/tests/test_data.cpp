#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "fairmatch/data.hpp"
#include "fairmatch/json_io.hpp"

using namespace fairmatch;

namespace {

TripRecord trip(std::string driver, double plat, double plon, double dlat, double dlon,
                double dist) {
  return {std::move(driver), "2013-01-15 18:05:00", plat, plon, dlat, dlon, dist};
}

CsvTrips load_csv(const std::string& name) {
  std::ifstream in(std::string(FAIRMATCH_TEST_DATA) + "/" + name);
  EXPECT_TRUE(in.good()) << name;
  return read_trips_csv(in);
}

}  // namespace

TEST(Grid, DefaultShape) {
  const GridSpec g;
  EXPECT_EQ(g.columns(), 40);
  EXPECT_EQ(g.rows(), 11);
  EXPECT_EQ(g.num_bins(), 440);
}

TEST(Grid, BinLocation) {
  const GridSpec g;
  EXPECT_EQ(bin_location(40.75, -73.97, g), 300);
  EXPECT_EQ(bin_location(40.4, -75.0, g), 0);
  EXPECT_EQ(bin_location(40.449999, -74.950001, g), 0);
  EXPECT_EQ(bin_location(40.45, -74.95, g), 41);
  EXPECT_FALSE(bin_location(40.95, -74.0, g).has_value());
  EXPECT_FALSE(bin_location(40.5, -73.0, g).has_value());
  EXPECT_FALSE(bin_location(0.0, 0.0, g).has_value());
  EXPECT_FALSE(bin_location(40.39, -74.0, g).has_value());
}

TEST(Grid, ValidateRejectsBadStep) {
  GridSpec g;
  g.step = 0.0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(AcceptProb, KappaLift) {
  const DemographicParams d;
  EXPECT_DOUBLE_EQ(assign_accept_prob(Group::Advantaged, Group::Advantaged, d), 0.8);
  EXPECT_DOUBLE_EQ(assign_accept_prob(Group::Disadvantaged, Group::Disadvantaged, d), 0.65);
  EXPECT_DOUBLE_EQ(assign_accept_prob(Group::Advantaged, Group::Disadvantaged, d), 0.55);
  EXPECT_DOUBLE_EQ(assign_accept_prob("disadvantaged", "advantaged", d), 0.55);
  DemographicParams none = d;
  none.kappa = 0.0;
  EXPECT_DOUBLE_EQ(assign_accept_prob(Group::Advantaged, Group::Advantaged, none), 0.6);
  EXPECT_THROW(assign_accept_prob("purple", "advantaged", d), std::invalid_argument);
  none.kappa = 1.5;
  EXPECT_THROW(none.validate(), std::invalid_argument);
}

TEST(Synthetic, DefaultShapeAndRates) {
  const Instance inst = generate_synthetic({}, 2020);
  EXPECT_EQ(inst.num_drivers(), 100u);
  EXPECT_EQ(inst.num_request_types(), 50u);
  EXPECT_EQ(inst.horizon(), 700);
  double sum = 0.0;
  for (const RequestType& r : inst.request_types()) {
    EXPECT_GE(r.rate, 1.0);
    EXPECT_EQ(r.rate, std::round(r.rate));
    sum += r.rate;
  }
  EXPECT_EQ(sum, 700.0);
  for (const Edge& e : inst.edges()) {
    EXPECT_GE(e.accept_prob, 0.5);
    EXPECT_LE(e.accept_prob, 1.0);
    EXPECT_GE(e.profit, 0.0);
    EXPECT_LE(e.profit, 1.0);
  }
  // About 10% of the 5000 pairs.
  EXPECT_NEAR(static_cast<double>(inst.num_edges()), 500.0, 5.0 * std::sqrt(450.0));
  EXPECT_TRUE(validate_instance(inst).ok());
}

TEST(Synthetic, Deterministic) {
  EXPECT_EQ(instance_to_json(generate_synthetic({}, 7)), instance_to_json(generate_synthetic({}, 7)));
  EXPECT_NE(instance_to_json(generate_synthetic({}, 7)), instance_to_json(generate_synthetic({}, 8)));
}

TEST(Synthetic, ZeroRatesRepaired) {
  SyntheticParams p;
  p.num_request_types = 50;
  p.horizon = 60;  // many types draw 0
  const Instance inst = generate_synthetic(p, 3);
  double sum = 0.0;
  for (const RequestType& r : inst.request_types()) {
    EXPECT_GE(r.rate, 1.0);
    sum += r.rate;
  }
  EXPECT_EQ(sum, 60.0);
}

TEST(Ingest, SingleRecord) {
  const std::vector<TripRecord> recs{trip("h1", 40.75, -73.97, 40.76, -73.98, 1.3)};
  const IngestResult res = ingest_trips(recs, {});
  const Instance& inst = res.instance;
  ASSERT_EQ(inst.num_drivers(), 1u);
  ASSERT_EQ(inst.num_request_types(), 1u);
  ASSERT_EQ(inst.num_edges(), 1u);
  EXPECT_EQ(inst.edge(0).profit, 1.0);
  EXPECT_EQ(inst.horizon(), static_cast<int>(inst.request_type(0).rate));
  EXPECT_TRUE(validate_instance(inst).ok());
  EXPECT_EQ(res.report.pickup_bin_histogram.at(300), 1u);
}

TEST(Ingest, ProfitIsNormalizedDistance) {
  const std::vector<TripRecord> recs{trip("h1", 40.75, -73.97, 40.76, -73.98, 2.0),
                                     trip("h1", 40.75, -73.97, 40.65, -73.78, 4.0)};
  const Instance inst = ingest_trips(recs, {}).instance;
  ASSERT_EQ(inst.num_request_types(), 2u);
  std::vector<double> w;
  for (const Edge& e : inst.edges()) w.push_back(e.profit);
  std::sort(w.begin(), w.end());
  ASSERT_EQ(w.size(), 2u);
  EXPECT_DOUBLE_EQ(w[0], 0.5);
  EXPECT_DOUBLE_EQ(w[1], 1.0);
}

TEST(Ingest, EdgesOnlyWithinPickupBin) {
  const CsvTrips csv = load_csv("trips_peak.csv");
  const Instance inst = ingest_trips(csv.records, {}).instance;
  for (const Edge& e : inst.edges()) {
    const std::string& d = inst.driver(e.driver).id;  // d<bin>-G
    const std::string& r = inst.request_type(e.request_type).id;  // r<start>-<end>-G
    EXPECT_EQ(d.substr(1, d.find('-') - 1), r.substr(1, r.find('-') - 1));
  }
}

TEST(Ingest, TargetsAndValidity) {
  const CsvTrips csv = load_csv("trips_peak.csv");
  IngestParams p;
  p.pickup_hour = 18;
  const IngestResult res = ingest_trips(csv.records, p);
  EXPECT_EQ(res.instance.num_drivers(), 48u);
  EXPECT_EQ(res.instance.num_request_types(), 24u);
  EXPECT_TRUE(validate_instance(res.instance).ok()) << validate_instance(res.instance).to_string();
  EXPECT_TRUE(res.report.warnings.empty());
  EXPECT_GT(res.report.outside_hour, 0u);
  for (const RequestType& r : res.instance.request_types()) EXPECT_GE(r.rate, 1.0);
  for (const Edge& e : res.instance.edges()) {
    EXPECT_GE(e.profit, 0.0);
    EXPECT_LE(e.profit, 1.0);
    EXPECT_TRUE(e.accept_prob == 0.8 || e.accept_prob == 0.65 || e.accept_prob == 0.55);
  }
}

TEST(Ingest, RecordOrderDoesNotMatter) {
  CsvTrips csv = load_csv("trips_small.csv");
  const auto a = instance_to_json(ingest_trips(csv.records, {}).instance);
  std::mt19937 g(1);
  for (int k = 0; k < 3; ++k) {
    std::shuffle(csv.records.begin(), csv.records.end(), g);
    EXPECT_EQ(instance_to_json(ingest_trips(csv.records, {}).instance), a);
  }
}

TEST(Ingest, GroupShares) {
  // 300 riders, each its own request type; 120 drivers each in their own bin.
  std::vector<TripRecord> recs;
  for (int i = 0; i < 300; ++i) {
    const double lat = 40.41 + 0.05 * (i % 11), lon = -74.99 + 0.05 * (i / 11 % 40);
    recs.push_back(trip("drv" + std::to_string(i % 120), lat, lon, 40.41 + 0.05 * ((i / 7) % 11),
                        -74.99 + 0.05 * (i % 40), 1.0 + i));
  }
  IngestParams p;
  p.target_requests = 1000;
  p.target_drivers = 1000;
  const Instance inst = ingest_trips(recs, p).instance;
  std::size_t dis = 0;
  for (const RequestType& r : inst.request_types()) dis += r.group == "disadvantaged";
  EXPECT_EQ(inst.num_request_types(), 300u);
  EXPECT_EQ(dis, 100u);
}

TEST(Ingest, NoUsableRecordsThrows) {
  const std::vector<TripRecord> recs{trip("h", 0.0, 0.0, 0.0, 0.0, 1.0)};
  EXPECT_THROW(ingest_trips(recs, {}), std::runtime_error);
}

TEST(Csv, CountsMalformedRows) {
  const CsvTrips csv = load_csv("trips_peak.csv");
  EXPECT_EQ(csv.rows, 4000u);
  EXPECT_EQ(csv.malformed, 2u);
  const IngestResult res = ingest_trips(csv.records, {});
  EXPECT_EQ(res.report.out_of_grid, 2u);
}

TEST(Csv, MissingColumnThrows) {
  std::istringstream in("driver_hash,pickup_datetime\nabc,2013-01-01 00:00:00\n");
  EXPECT_THROW(read_trips_csv(in), std::runtime_error);
}

TEST(Csv, ColumnsInAnyOrder) {
  std::istringstream in(
      "trip_distance,dropoff_lat,dropoff_lon,pickup_lat,pickup_lon,dropoff_datetime,"
      "pickup_datetime,driver_hash\n"
      "2.5,40.76,-73.98,40.75,-73.97,2013-01-15 18:20:00,2013-01-15 18:05:00,xyz\n");
  const CsvTrips csv = read_trips_csv(in);
  ASSERT_EQ(csv.records.size(), 1u);
  EXPECT_EQ(csv.records[0].driver_hash, "xyz");
  EXPECT_EQ(csv.records[0].distance, 2.5);
  EXPECT_EQ(csv.records[0].pickup_lon, -73.97);
}
