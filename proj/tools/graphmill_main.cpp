// graphmill command-line driver: run one (engine x algorithm x graph) job or
// sweep engines and worker counts, writing metrics.csv and states.tsv.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graphmill/errors.hpp"
#include "graphmill/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"graphmill: multi-engine graph processing benchmark harness"};

  std::string engine = "mr";
  std::string algorithm = "sssp";
  std::string input;
  std::string generate;
  std::string seed_labels;
  std::string output;
  std::string dfs_root;
  std::string sweep_workers;
  std::string sweep_engines;
  graphmill::RunConfig config;

  app.add_option("--engine", engine, "Engine: mr, mr2, or bsp")->capture_default_str();
  app.add_option("--algorithm", algorithm, "Algorithm: sssp or rip")->capture_default_str();
  app.add_option("--input", input, "Edge-list file (src dst [weight] per line)");
  app.add_option("--generate", generate,
                 "Generator spec, e.g. n=100000,avg=4,exp=2.5,seed=42");
  app.add_option("--workers", config.workers, "Simulated hosts / partitions")
      ->capture_default_str();
  app.add_option("--iterations", config.iterations, "Algorithm iterations (BSP max supersteps)")
      ->capture_default_str();
  app.add_option("--source", config.source, "SSSP source vertex")->capture_default_str();
  app.add_option("--seed-labels", seed_labels, "Seed-label file for rip");
  app.add_option("--classes", config.num_classes, "Number of rip label classes")
      ->capture_default_str();
  app.add_option("--rip-seed-fraction", config.rip_seed_fraction,
                 "Fraction of vertices seeded when no --seed-labels file is given")
      ->capture_default_str();
  app.add_flag("--combiner", config.use_combiner, "Enable message combiners");
  app.add_flag("--clamp-seeds,!--no-clamp-seeds", config.clamp_seeds,
               "Keep seed labels fixed across rip iterations (default on)");
  app.add_option("--memory-budget", config.memory_budget_bytes,
                 "BSP resident-memory budget in bytes (0 = unlimited)");
  app.add_option("--cost-network", config.cost.network_s_per_mib,
                 "Injected network delay, seconds per MiB transferred");
  app.add_option("--cost-disk", config.cost.disk_s_per_mib,
                 "Injected disk delay, seconds per MiB read or written");
  app.add_option("--seed", config.random_seed, "Run RNG seed")->capture_default_str();
  app.add_option("--output", output, "Output directory")->required();
  app.add_option("--dfs-root", dfs_root,
                 "Simulated-DFS root directory (default $GRAPHMILL_DFS_ROOT or system temp)");
  app.add_flag("--keep-dfs", config.keep_dfs, "Retain intermediate DFS files after the run");
  app.add_option("--sweep-workers", sweep_workers, "Comma list of worker counts to sweep");
  app.add_option("--sweep-engines", sweep_engines, "Comma list of engines to sweep");

  CLI11_PARSE(app, argc, argv);

  graphmill::RunOutcome outcome;
  try {
    config.engine = graphmill::parse_engine(engine);
    config.algorithm = graphmill::parse_algorithm(algorithm);
    config.input_path = input;
    if (!generate.empty()) config.generate = graphmill::parse_generator_spec(generate);
    config.seed_label_path = seed_labels;
    config.output_dir = output;
    config.dfs_root = dfs_root;

    if (sweep_workers.empty() != sweep_engines.empty())
      throw graphmill::ConfigError("--sweep-workers and --sweep-engines must be given together");

    if (!sweep_workers.empty()) {
      std::vector<std::uint32_t> workers;
      std::vector<graphmill::EngineKind> engines;
      std::stringstream ws(sweep_workers);
      std::string item;
      while (std::getline(ws, item, ',')) workers.push_back(std::stoul(item));
      std::stringstream es(sweep_engines);
      while (std::getline(es, item, ',')) engines.push_back(graphmill::parse_engine(item));
      outcome = graphmill::run_sweep(config, workers, engines);
    } else {
      outcome = graphmill::run_single(config);
    }
  } catch (const std::exception& e) {
    std::cerr << "graphmill: " << e.what() << "\n";
    return graphmill::kExitConfigError;
  }

  if (outcome.exit_code != graphmill::kExitOk)
    std::cerr << "graphmill: " << outcome.error << "\n";
  return outcome.exit_code;
}
