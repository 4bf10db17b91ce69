#include "fairmatch/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fairmatch/fixtures.hpp"
#include "fairmatch/json_io.hpp"
#include "fairmatch/lp.hpp"
#include "fairmatch/policies.hpp"
#include "fairmatch/random.hpp"
#include "fairmatch/simulator.hpp"
#include "fairmatch/star.hpp"

namespace fairmatch {

int resolve_threads(int flag_value) {
  if (const char* env = std::getenv("FAIRMATCH_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return flag_value;
}

// ---- sweep -----------------------------------------------------------------

std::vector<std::pair<double, double>> SweepConfig::grid() const {
  const long steps = std::lround(1.0 / alpha_step);
  std::vector<std::pair<double, double>> g;
  for (long i = 0; i <= steps; ++i) {
    const double alpha = static_cast<double>(i) / static_cast<double>(steps);
    g.emplace_back(alpha, 1.0 - alpha);
  }
  return g;
}

void SweepConfig::validate() const {
  if (!(alpha_step > 0.0 && alpha_step <= 1.0))
    throw std::invalid_argument("alpha step must be in (0,1]");
  const double steps = 1.0 / alpha_step;
  if (std::abs(steps - std::round(steps)) > 1e-9)
    throw std::invalid_argument("alpha step must divide 1");
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (deltas.empty()) throw std::invalid_argument("at least one quota value required");
  for (int d : deltas)
    if (d < 1) throw std::invalid_argument("quota values must be >= 1");
  for (const std::string& p : policies)
    if (p != "nadap" && p != "greedy" && p != "uniform")
      throw std::invalid_argument("unknown policy '" + p + "'");
}

nlohmann::json SweepConfig::to_json() const {
  return {{"alpha_step", alpha_step}, {"deltas", deltas},     {"iterations", iterations},
          {"seed", seed},             {"policies", policies}, {"threads", threads}};
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j) {
  SweepConfig c;
  if (j.contains("alpha_step")) c.alpha_step = j.at("alpha_step").get<double>();
  if (j.contains("deltas")) c.deltas = j.at("deltas").get<std::vector<int>>();
  if (j.contains("iterations")) c.iterations = j.at("iterations").get<std::size_t>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("policies")) c.policies = j.at("policies").get<std::vector<std::string>>();
  if (j.contains("threads")) c.threads = j.at("threads").get<int>();
  return c;
}

bool SweepResult::gate_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.gate_ok; });
}

namespace {

SweepRow make_row(const Policy& policy, const Instance& inst, const Benchmarks& bench, int delta,
                  std::optional<std::pair<double, double>> ab, const SweepConfig& config,
                  std::uint64_t seed) {
  MonteCarloOptions mc;
  mc.threads = config.threads;
  const Estimates est = run_monte_carlo(inst, policy, config.iterations, seed, mc);
  const CompetitiveRatios cr = competitive_ratios(est, bench.opt_p, bench.opt_f);

  SweepRow row;
  row.policy = policy.name();
  row.delta = delta;
  row.iterations = est.iterations;
  row.profit_cr = cr.profit;
  row.fairness_cr = cr.fairness;
  row.profit_cr_se = cr.profit_se;
  row.fairness_cr_se = cr.fairness_se;
  row.profit_mean = est.profit_mean;
  row.profit_se = est.profit_se;
  row.fairness = est.fairness;
  row.fairness_se = est.fairness_se;
  row.opt_p = bench.opt_p;
  row.opt_f = bench.opt_f;
  if (ab) {
    row.alpha = ab->first;
    row.beta = ab->second;
    row.profit_lb = ab->first / std::numbers::e;
    row.fairness_lb = ab->second / std::numbers::e;
    if (row.profit_cr && *row.profit_cr < *row.profit_lb - kGateSigmas * row.profit_cr_se)
      row.gate_ok = false;
    if (row.fairness_cr && *row.fairness_cr < *row.fairness_lb - kGateSigmas * row.fairness_cr_se)
      row.gate_ok = false;
  }
  return row;
}

}  // namespace

SweepResult run_sweep(const Instance& base, const SweepConfig& config) {
  config.validate();
  SweepResult result;
  for (int delta : config.deltas) {
    const Instance inst = base.with_uniform_quota(delta);
    const ValidationReport vr = validate_instance(inst);
    if (!vr.ok()) throw std::invalid_argument("invalid instance:\n" + vr.to_string());
    const Benchmarks bench = solve_benchmarks(inst);
    // Common random numbers across policies within one quota value.
    const std::uint64_t seed = derive_seed(config.seed, static_cast<std::uint64_t>(delta));

    for (const std::string& name : config.policies) {
      if (name == "nadap") {
        for (const auto& ab : config.grid()) {
          const NonAdaptivePolicy policy(
              make_nadap(bench.x_star, bench.y_star, ab.first, ab.second, inst));
          result.rows.push_back(make_row(policy, inst, bench, delta, ab, config, seed));
        }
      } else if (name == "greedy") {
        result.rows.push_back(make_row(GreedyPolicy(inst), inst, bench, delta, {}, config, seed));
      } else {
        result.rows.push_back(make_row(UniformPolicy(inst), inst, bench, delta, {}, config, seed));
      }
    }
  }
  return result;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "policy,alpha,beta,delta,iterations,profit_cr,profit_cr_se,fairness_cr,fairness_cr_se,"
        "profit_lb,fairness_lb,profit_mean,profit_se,fairness,fairness_se,opt_p,opt_f,gate\n";
  for (const SweepRow& r : rows) {
    os << r.policy << ',' << fmt(r.alpha) << ',' << fmt(r.beta) << ',' << r.delta << ','
       << r.iterations << ',' << fmt(r.profit_cr) << ',' << fmt(r.profit_cr_se) << ','
       << fmt(r.fairness_cr) << ',' << fmt(r.fairness_cr_se) << ',' << fmt(r.profit_lb) << ','
       << fmt(r.fairness_lb) << ',' << fmt(r.profit_mean) << ',' << fmt(r.profit_se) << ','
       << fmt(r.fairness) << ',' << fmt(r.fairness_se) << ',' << fmt(r.opt_p) << ','
       << fmt(r.opt_f) << ',' << (r.gate_ok ? "pass" : "FAIL") << '\n';
  }
}

// ---- star check --------------------------------------------------------------

StarCheckReport run_star_check(int K, double eps, std::vector<int> horizons, double z_step,
                               double tolerance) {
  if (horizons.empty()) throw std::invalid_argument("star check needs at least one horizon");
  const long steps = std::lround(1.0 / z_step);
  if (steps < 1 || std::abs(1.0 / z_step - static_cast<double>(steps)) > 1e-9)
    throw std::invalid_argument("z step must divide 1");
  std::sort(horizons.begin(), horizons.end());

  StarCheckReport rep;
  rep.K = K;
  rep.eps = eps;
  rep.cap = star_ratio_cap(eps);
  rep.tolerance = tolerance;

  auto scan = [&](auto&& evaluate, StarCheckRow& row) {
    row.max_ratio_sum = -std::numeric_limits<double>::infinity();
    for (long i = 0; i <= steps; ++i) {
      for (long j = 0; i + j <= steps; ++j) {
        const double z0 = static_cast<double>(i) / steps;
        const double z_rest = static_cast<double>(j) / steps;
        const double s = star_ratio_sum(evaluate(z0, z_rest), K, eps);
        if (s > row.max_ratio_sum) {
          row.max_ratio_sum = s;
          row.argmax_z0 = z0;
          row.argmax_z_rest = z_rest;
        }
      }
    }
    row.profit_ratio_full_center = evaluate(1.0, 0.0).profit / star_opt_p();
  };

  StarCheckRow limit;
  scan([&](double a, double b) { return star_limit(a, b, K, eps); }, limit);
  rep.limit_max_ratio_sum = limit.max_ratio_sum;

  for (int T : horizons) {
    StarCheckRow row;
    row.horizon = T;
    scan([&](double a, double b) { return star_curves(a, b, K, eps, T); }, row);
    rep.rows.push_back(row);
  }

  rep.cap_ok = rep.rows.back().max_ratio_sum <= rep.cap + tolerance;
  rep.monotone_ok = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const double prev = std::abs(rep.rows[i - 1].max_ratio_sum - rep.limit_max_ratio_sum);
    const double cur = std::abs(rep.rows[i].max_ratio_sum - rep.limit_max_ratio_sum);
    if (cur > prev + 1e-15) rep.monotone_ok = false;
  }
  return rep;
}

// ---- verify ------------------------------------------------------------------

bool VerifyReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; });
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// Monte Carlo vs exact oracle on profit and every per-type rate, 4 sigma.
VerifyCheck oracle_check(const std::string& name, const Instance& inst, const NonAdaptiveVector& z,
                         std::size_t iterations, std::uint64_t seed, int threads) {
  const ExactValues exact = exact_evaluate(inst, z);
  MonteCarloOptions mc;
  mc.threads = threads;
  const Estimates est = run_monte_carlo(inst, NonAdaptivePolicy(z), iterations, seed, mc);

  VerifyCheck c{name, true, ""};
  double worst = 0.0;
  auto within = [&](double mean, double se, double truth) {
    const double dev = std::abs(mean - truth);
    if (se > 0.0) worst = std::max(worst, dev / se);
    return se > 0.0 ? dev <= 4.0 * se : dev <= 1e-12;
  };
  c.pass = within(est.profit_mean, est.profit_se, exact.profit);
  for (RequestIndex v = 0; v < inst.num_request_types(); ++v)
    c.pass = within(est.rate_mean[v], est.rate_se[v], exact.rate[v]) && c.pass;
  c.detail = "max |MC - exact| = " + num(worst) + " sigma";
  return c;
}

}  // namespace

VerifyReport run_verify(const Instance& inst, const VerifyOptions& options) {
  VerifyReport rep;
  auto add = [&](std::string name, bool pass, std::string detail) {
    rep.checks.push_back({std::move(name), pass, std::move(detail)});
  };

  const ValidationReport vr = validate_instance(inst);
  add("instance valid", vr.ok(), vr.to_string());
  if (!vr.ok()) return rep;

  const LpSolution profit = solve_lp(build_profit_lp(inst));
  const LpSolution fairness = solve_lp(build_fairness_lp(inst));
  add("profit LP optimal", profit.status == LpStatus::Optimal, to_string(profit.status));
  add("fairness LP optimal", fairness.status == LpStatus::Optimal, to_string(fairness.status));
  if (profit.status != LpStatus::Optimal || fairness.status != LpStatus::Optimal) return rep;

  std::vector<double> x = options.inject_x.value_or(profit.values);
  std::vector<double> y(fairness.values.begin(), fairness.values.end() - 1);
  const ValidationReport fx = check_feasibility(inst, x, kReportTolerance);
  const ValidationReport fy = check_feasibility(inst, y, kReportTolerance);
  add("x* feasible", fx.ok(), fx.to_string());
  add("y* feasible", fy.ok(), fy.to_string());
  if (!fx.ok() || !fy.ok()) return rep;

  const double opt_p = profit.objective_value, opt_f = fairness.objective_value;
  add("OPT-P >= profit(y*)", opt_p >= evaluate_profit(inst, y) - kReportTolerance,
      "OPT-P = " + num(opt_p) + ", profit(y*) = " + num(evaluate_profit(inst, y)));
  add("OPT-F >= fairness(x*)", opt_f >= evaluate_fairness(inst, x) - kReportTolerance,
      "OPT-F = " + num(opt_f) + ", fairness(x*) = " + num(evaluate_fairness(inst, x)));

  const int threads = options.threads;
  add("oracle: uniform T=2 exact", true, "");
  {
    const Instance fx2 = fixtures::uniform_t2();
    const ExactValues ev = exact_evaluate(fx2, make_uniform_vector(fx2));
    rep.checks.back().pass = std::abs(ev.profit - 0.75) < 1e-12 && std::abs(ev.fairness - 0.5) < 1e-12;
    rep.checks.back().detail = "(" + num(ev.profit) + ", " + num(ev.fairness) + ")";
  }
  std::size_t k = 0;
  for (const Instance& tiny : fixtures::tiny_instances(10, options.seed)) {
    const Benchmarks b = solve_benchmarks(tiny);
    const NonAdaptiveVector z = make_nadap(b.x_star, b.y_star, 0.5, 0.5, tiny);
    rep.checks.push_back(oracle_check("oracle: tiny instance " + std::to_string(k), tiny, z,
                                      options.oracle_iterations, derive_seed(options.seed, k),
                                      threads));
    ++k;
  }

  try {
    const NonAdaptiveVector z = make_nadap(x, y, 0.5, 0.5, inst);
    rep.checks.push_back(oracle_check("oracle: this instance, NAdap(0.5,0.5)", inst, z,
                                      options.instance_iterations, options.seed, threads));
  } catch (const std::length_error&) {
    add("oracle: this instance, NAdap(0.5,0.5)", true, "skipped: too large for exact evaluation");
  }
  return rep;
}

// ---- command entry points --------------------------------------------------------

int cmd_gen_synthetic(const SyntheticParams& params, std::uint64_t seed,
                      const std::filesystem::path& out_path, std::ostream& out) {
  const Instance inst = generate_synthetic(params, seed);
  save_instance(inst, out_path);
  out << "wrote " << out_path.string() << ": " << inst.num_drivers() << " drivers, "
      << inst.num_request_types() << " request types, " << inst.num_edges() << " edges, T = "
      << inst.horizon() << '\n';
  return 0;
}

int cmd_ingest(const std::filesystem::path& csv_path, const IngestParams& params,
               const std::filesystem::path& out_path,
               const std::optional<std::filesystem::path>& report_path, std::ostream& out) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + csv_path.string());
  const CsvTrips trips = read_trips_csv(in);
  IngestResult res = ingest_trips(trips.records, params);
  res.report.malformed_rows = trips.malformed;
  res.report.records_in = trips.rows;
  save_instance(res.instance, out_path);
  if (report_path) write_json_file(res.report.to_json(), *report_path);

  const ValidationReport vr = validate_instance(res.instance);
  out << "wrote " << out_path.string() << ": " << res.instance.num_drivers() << " driver types, "
      << res.instance.num_request_types() << " request types, " << res.instance.num_edges()
      << " edges, T = " << res.instance.horizon() << " (" << trips.malformed
      << " malformed rows, " << res.report.out_of_grid << " out of grid)\n";
  for (const std::string& w : res.report.warnings) out << "warning: " << w << '\n';
  if (!vr.ok()) {
    out << vr.to_string();
    return 1;
  }
  return 0;
}

int cmd_solve_lp(const std::filesystem::path& instance_path,
                 const std::optional<std::filesystem::path>& lp_dir, std::ostream& out) {
  const Instance inst = load_instance(instance_path);
  const ValidationReport vr = validate_instance(inst);
  if (!vr.ok()) {
    out << vr.to_string();
    return 1;
  }
  const LpProblem profit_lp = build_profit_lp(inst);
  const LpProblem fairness_lp = build_fairness_lp(inst);
  if (lp_dir) {
    std::filesystem::create_directories(*lp_dir);
    std::ofstream(*lp_dir / "profit.lp") << [&] {
      std::ostringstream os;
      write_lp_format(os, profit_lp);
      return os.str();
    }();
    std::ofstream(*lp_dir / "fairness.lp") << [&] {
      std::ostringstream os;
      write_lp_format(os, fairness_lp);
      return os.str();
    }();
  }
  const LpSolution p = solve_lp(profit_lp);
  const LpSolution f = solve_lp(fairness_lp);
  out.precision(12);
  out << "profit LP:   " << to_string(p.status) << ", OPT-P = " << p.objective_value << " ("
      << p.iterations << " pivots)\n";
  out << "fairness LP: " << to_string(f.status) << ", OPT-F = " << f.objective_value << " ("
      << f.iterations << " pivots)\n";
  return p.status == LpStatus::Optimal && f.status == LpStatus::Optimal ? 0 : 1;
}

int cmd_sweep(const std::filesystem::path& instance_path, const SweepConfig& config,
              const std::filesystem::path& out_csv, std::ostream& out) {
  const Instance inst = load_instance(instance_path);
  const SweepResult result = run_sweep(inst, config);
  {
    std::ofstream csv(out_csv, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open " + out_csv.string());
    write_sweep_csv(csv, result.rows);
  }
  std::size_t failed = 0;
  for (const SweepRow& r : result.rows)
    if (!r.gate_ok) ++failed;
  out << "wrote " << out_csv.string() << ": " << result.rows.size() << " rows";
  if (failed > 0)
    out << ", " << failed << " NAdap rows below the (alpha/e, beta/e) gate\n";
  else
    out << ", all NAdap rows clear the (alpha/e, beta/e) gate\n";
  return failed > 0 ? 2 : 0;
}

int cmd_star_check(int K, double eps, const std::vector<int>& horizons, std::ostream& out) {
  const StarCheckReport rep = run_star_check(K, eps, horizons);
  out.precision(10);
  out << "star K=" << K << " eps=" << eps << "  cap 1-1/e+2eps = " << rep.cap
      << "  limit max = " << rep.limit_max_ratio_sum << '\n';
  for (const StarCheckRow& r : rep.rows)
    out << "  T=" << r.horizon << "  max ratio-sum " << r.max_ratio_sum << " at (z0=" << r.argmax_z0
        << ", z_rest=" << r.argmax_z_rest << ")  P/OPT-P at z0=1: " << r.profit_ratio_full_center
        << '\n';
  out << "cap check: " << (rep.cap_ok ? "pass" : "FAIL")
      << "  monotone approach: " << (rep.monotone_ok ? "pass" : "FAIL") << '\n';
  return rep.pass() ? 0 : 1;
}

int cmd_verify(const std::filesystem::path& instance_path, const VerifyOptions& options,
               std::ostream& out) {
  const Instance inst = load_instance(instance_path);
  const VerifyReport rep = run_verify(inst, options);
  for (const VerifyCheck& c : rep.checks) {
    out << (c.pass ? "[pass] " : "[FAIL] ") << c.name;
    if (!c.detail.empty() && (c.detail.find('\n') == std::string::npos)) out << "  " << c.detail;
    out << '\n';
    if (!c.pass && c.detail.find('\n') != std::string::npos) out << c.detail;
  }
  out << (rep.pass() ? "verify: pass\n" : "verify: FAIL\n");
  return rep.pass() ? 0 : 1;
}

}  // namespace fairmatch
