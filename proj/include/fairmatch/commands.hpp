#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fairmatch/data.hpp"
#include "fairmatch/instance.hpp"
#include "json.hpp"

namespace fairmatch {

// --threads, unless FAIRMATCH_THREADS is set to a positive integer.
int resolve_threads(int flag_value);

struct SweepConfig {
  double alpha_step = 0.1;  // alpha in {0, step, ..., 1}, beta = 1 - alpha
  std::vector<int> deltas{1, 2, 3};
  std::size_t iterations = 5000;
  std::uint64_t seed = 2020;
  std::vector<std::string> policies{"nadap", "greedy", "uniform"};
  int threads = 0;

  std::vector<std::pair<double, double>> grid() const;
  void validate() const;

  nlohmann::json to_json() const;
  // Keys mirror the fields; missing keys keep their defaults.
  static SweepConfig from_json(const nlohmann::json& j);
};

// Gate slack on the competitive-ratio lower bounds, in standard errors.
inline constexpr double kGateSigmas = 4.0;

struct SweepRow {
  std::string policy;
  std::optional<double> alpha, beta;
  int delta = 1;
  std::size_t iterations = 0;
  std::optional<double> profit_cr, fairness_cr;
  double profit_cr_se = 0.0, fairness_cr_se = 0.0;
  std::optional<double> profit_lb, fairness_lb;  // alpha/e and beta/e (nadap only)
  double profit_mean = 0.0, profit_se = 0.0;
  double fairness = 0.0, fairness_se = 0.0;
  double opt_p = 0.0, opt_f = 0.0;
  bool gate_ok = true;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool gate_ok() const;
};

// Per quota: rebuild the instance with that uniform quota, solve both LPs
// once, then simulate every grid point and baseline. Rows come out ordered by
// delta, then nadap by alpha, then greedy, then uniform.
SweepResult run_sweep(const Instance& base, const SweepConfig& config);

// Stable column order; see README.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

struct StarCheckRow {
  int horizon = 0;
  double max_ratio_sum = 0.0;
  double argmax_z0 = 0.0;
  double argmax_z_rest = 0.0;
  double profit_ratio_full_center = 0.0;  // P/OPT-P at z0 = 1
};

struct StarCheckReport {
  int K = 0;
  double eps = 0.0;
  double cap = 0.0;
  double tolerance = 0.0;
  double limit_max_ratio_sum = 0.0;  // same grid, T -> infinity
  std::vector<StarCheckRow> rows;    // ascending horizon
  bool cap_ok = false;               // largest T within cap + tolerance
  bool monotone_ok = false;          // distance to the limit shrinks with T

  bool pass() const { return cap_ok && monotone_ok; }
};

StarCheckReport run_star_check(int K, double eps, std::vector<int> horizons,
                               double z_step = 0.05, double tolerance = 0.01);

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  std::optional<std::vector<double>> inject_x;  // test hook: replaces x*
  std::size_t oracle_iterations = 200000;
  std::size_t instance_iterations = 5000;
  std::uint64_t seed = 7;
  int threads = 0;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool pass() const;
};

VerifyReport run_verify(const Instance& inst, const VerifyOptions& options);

// Command entry points: print to `out`, return a process exit code.
int cmd_gen_synthetic(const SyntheticParams& params, std::uint64_t seed,
                      const std::filesystem::path& out_path, std::ostream& out);
int cmd_ingest(const std::filesystem::path& csv_path, const IngestParams& params,
               const std::filesystem::path& out_path,
               const std::optional<std::filesystem::path>& report_path, std::ostream& out);
int cmd_solve_lp(const std::filesystem::path& instance_path,
                 const std::optional<std::filesystem::path>& lp_dir, std::ostream& out);
int cmd_sweep(const std::filesystem::path& instance_path, const SweepConfig& config,
              const std::filesystem::path& out_csv, std::ostream& out);
int cmd_star_check(int K, double eps, const std::vector<int>& horizons, std::ostream& out);
int cmd_verify(const std::filesystem::path& instance_path, const VerifyOptions& options,
               std::ostream& out);

}  // namespace fairmatch
