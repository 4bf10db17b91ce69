#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairmatch/commands.hpp"
#include "fairmatch/json_io.hpp"

namespace fs = std::filesystem;
using namespace fairmatch;

int main(int argc, char** argv) {
  CLI::App app{"fairmatch: profit/fairness trade-offs in online rideshare matching"};
  app.require_subcommand(1);

  // gen-synthetic
  SyntheticParams syn;
  std::uint64_t syn_seed = 1;
  std::string syn_out = "synthetic.json";
  auto* gen = app.add_subcommand("gen-synthetic", "Generate a random synthetic instance");
  gen->add_option("--seed", syn_seed, "RNG seed")->capture_default_str();
  gen->add_option("--out", syn_out, "Output instance JSON")->capture_default_str();
  gen->add_option("--drivers", syn.num_drivers)->capture_default_str();
  gen->add_option("--requests", syn.num_request_types)->capture_default_str();
  gen->add_option("--horizon", syn.horizon)->capture_default_str();
  gen->add_option("--edge-prob", syn.edge_prob)->capture_default_str();
  gen->add_option("--delta", syn.quota, "Uniform driver quota")->capture_default_str();

  // ingest
  IngestParams ing;
  std::string ing_csv, ing_out = "instance.json", ing_report;
  int ing_hour = -1;
  auto* ingest = app.add_subcommand("ingest", "Build an instance from a trip CSV");
  ingest->add_option("csv", ing_csv, "Trip records CSV")->required()->check(CLI::ExistingFile);
  ingest->add_option("--out", ing_out, "Output instance JSON")->capture_default_str();
  ingest->add_option("--report", ing_report, "Optional ingestion report JSON");
  ingest->add_option("--kappa", ing.demo.kappa, "Acceptance lift kappa in [0,1]")
      ->capture_default_str();
  ingest->add_option("--seed", ing.seed, "Seed for labels, downsampling and rates")
      ->capture_default_str();
  ingest->add_option("--delta", ing.quota, "Uniform driver quota")->capture_default_str();
  ingest->add_option("--drivers", ing.target_drivers, "Driver types to keep")
      ->capture_default_str();
  ingest->add_option("--requests", ing.target_requests, "Request types to keep")
      ->capture_default_str();
  ingest->add_option("--hour", ing_hour, "Keep only pickups in this hour (0-23)");

  // solve-lp
  std::string lp_instance, lp_dir;
  auto* solve = app.add_subcommand("solve-lp", "Solve both benchmark LPs");
  solve->add_option("instance", lp_instance)->required()->check(CLI::ExistingFile);
  solve->add_option("--lp-out", lp_dir, "Directory for CPLEX-LP dumps of both programs");

  // sweep
  std::string sw_instance, sw_config, sw_out = "sweep.csv";
  double sw_alpha_step = 0.1;
  std::vector<int> sw_deltas;
  std::size_t sw_iterations = 0;
  std::uint64_t sw_seed = 0;
  int sw_threads = 0;
  std::vector<std::string> sw_policies;
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over (alpha, beta) and quota");
  sweep->add_option("instance", sw_instance)->required()->check(CLI::ExistingFile);
  sweep->add_option("--config", sw_config, "JSON config; flags given explicitly override it")
      ->check(CLI::ExistingFile);
  auto* o_step = sweep->add_option("--alpha-step", sw_alpha_step);
  auto* o_delta = sweep->add_option("--delta", sw_deltas, "Quota values, e.g. --delta 1 2 3");
  auto* o_iter = sweep->add_option("--iterations", sw_iterations);
  auto* o_seed = sweep->add_option("--seed", sw_seed);
  auto* o_threads = sweep->add_option("--threads", sw_threads, "0 = OpenMP default");
  auto* o_pol = sweep->add_option("--policies", sw_policies, "Subset of nadap greedy uniform");
  sweep->add_option("--out", sw_out, "Output CSV")->capture_default_str();

  // star-check
  int st_k = 10;
  double st_eps = 0.01;
  std::vector<int> st_horizons{10, 100, 1000, 10000};
  auto* star = app.add_subcommand("star-check", "Hardness curves on the star graph");
  star->add_option("--K", st_k, "Number of leaf request types")->capture_default_str();
  star->add_option("--eps", st_eps)->capture_default_str();
  star->add_option("--horizons", st_horizons)->capture_default_str();

  // verify
  std::string vf_instance;
  VerifyOptions vf;
  auto* verify = app.add_subcommand("verify", "Self-check an instance and the oracles");
  verify->add_option("instance", vf_instance)->required()->check(CLI::ExistingFile);
  verify->add_option("--iterations", vf.instance_iterations, "Episodes on the given instance")
      ->capture_default_str();
  verify->add_option("--seed", vf.seed)->capture_default_str();
  verify->add_option("--threads", vf.threads)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen_synthetic(syn, syn_seed, syn_out, std::cout);

    if (*ingest) {
      if (ing_hour >= 0) ing.pickup_hour = ing_hour;
      std::optional<fs::path> report;
      if (!ing_report.empty()) report = ing_report;
      return cmd_ingest(ing_csv, ing, ing_out, report, std::cout);
    }

    if (*solve) {
      std::optional<fs::path> dir;
      if (!lp_dir.empty()) dir = lp_dir;
      return cmd_solve_lp(lp_instance, dir, std::cout);
    }

    if (*sweep) {
      SweepConfig cfg;
      if (!sw_config.empty()) cfg = SweepConfig::from_json(read_json_file(sw_config));
      if (o_step->count()) cfg.alpha_step = sw_alpha_step;
      if (o_delta->count()) cfg.deltas = sw_deltas;
      if (o_iter->count()) cfg.iterations = sw_iterations;
      if (o_seed->count()) cfg.seed = sw_seed;
      if (o_threads->count()) cfg.threads = sw_threads;
      if (o_pol->count()) cfg.policies = sw_policies;
      cfg.threads = resolve_threads(cfg.threads);
      return cmd_sweep(sw_instance, cfg, sw_out, std::cout);
    }

    if (*star) return cmd_star_check(st_k, st_eps, st_horizons, std::cout);

    if (*verify) {
      vf.threads = resolve_threads(vf.threads);
      return cmd_verify(vf_instance, vf, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
