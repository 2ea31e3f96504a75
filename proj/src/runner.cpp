#include "graphmill/runner.hpp"

#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "graphmill/engine_bsp.hpp"
#include "graphmill/engine_mr.hpp"
#include "graphmill/engine_mr2.hpp"
#include "graphmill/errors.hpp"
#include "graphmill/vertex_programs.hpp"
#include "graphmill/worker_pool.hpp"

namespace graphmill {

std::string to_string(EngineKind e) {
  switch (e) {
    case EngineKind::kMapReduce: return "mr";
    case EngineKind::kMapSideJoin: return "mr2";
    case EngineKind::kBsp: return "bsp";
  }
  return "?";
}

std::string to_string(AlgorithmKind a) {
  return a == AlgorithmKind::kSssp ? "sssp" : "rip";
}

EngineKind parse_engine(const std::string& name) {
  if (name == "mr") return EngineKind::kMapReduce;
  if (name == "mr2") return EngineKind::kMapSideJoin;
  if (name == "bsp") return EngineKind::kBsp;
  throw ConfigError("unknown engine '" + name + "' (expected mr, mr2, or bsp)");
}

AlgorithmKind parse_algorithm(const std::string& name) {
  if (name == "sssp") return AlgorithmKind::kSssp;
  if (name == "rip") return AlgorithmKind::kRip;
  throw ConfigError("unknown algorithm '" + name + "' (expected sssp or rip)");
}

GeneratorSpec parse_generator_spec(const std::string& spec) {
  GeneratorSpec out;
  bool have_n = false;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ConfigError("generator spec item '" + item + "' is not key=value");
    std::string key = item.substr(0, eq);
    std::string value = item.substr(eq + 1);
    try {
      if (key == "n") {
        out.n = std::stoull(value);
        have_n = true;
      } else if (key == "avg") {
        out.avg = std::stod(value);
      } else if (key == "exp") {
        out.exponent = std::stod(value);
      } else if (key == "seed") {
        out.seed = std::stoull(value);
      } else {
        throw ConfigError("unknown generator spec key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw ConfigError("generator spec value '" + value + "' for key '" + key +
                        "' is not a number");
    } catch (const std::out_of_range&) {
      throw ConfigError("generator spec value '" + value + "' for key '" + key +
                        "' is out of range");
    }
  }
  if (!have_n) throw ConfigError("generator spec needs n=<count>");
  return out;
}

void validate_config(const RunConfig& config) {
  if (config.input_path.empty() == !config.generate.has_value())
    throw ConfigError("exactly one of --input and --generate must be given");
  if (config.workers < 1) throw ConfigError("workers must be >= 1");
  if (config.iterations < 1) throw ConfigError("iterations must be >= 1");
  if (config.algorithm == AlgorithmKind::kRip && config.num_classes < 2)
    throw ConfigError("rip requires at least 2 classes");
  if (config.rip_seed_fraction < 0.0 || config.rip_seed_fraction > 1.0)
    throw ConfigError("rip seed fraction must be in [0,1]");
  if (config.cost.network_s_per_mib < 0.0 || config.cost.disk_s_per_mib < 0.0)
    throw ConfigError("cost-model rates must be >= 0");
  if (config.output_dir.empty()) throw ConfigError("output directory must be given");
}

std::string config_hash(const RunConfig& config) {
  std::string repr;
  repr += "engine=" + to_string(config.engine);
  repr += ";algorithm=" + to_string(config.algorithm);
  repr += ";dataset=" + dataset_id(config);
  repr += ";workers=" + std::to_string(config.workers);
  repr += ";iterations=" + std::to_string(config.iterations);
  repr += ";source=" + std::to_string(config.source);
  repr += ";seed_labels=" + config.seed_label_path;
  repr += ";classes=" + std::to_string(config.num_classes);
  repr += ";seed_fraction=" + std::to_string(config.rip_seed_fraction);
  repr += ";clamp=" + std::to_string(config.clamp_seeds);
  repr += ";combiner=" + std::to_string(config.use_combiner);
  repr += ";budget=" + std::to_string(config.memory_budget_bytes);
  repr += ";cost_net=" + std::to_string(config.cost.network_s_per_mib);
  repr += ";cost_disk=" + std::to_string(config.cost.disk_s_per_mib);
  repr += ";rng=" + std::to_string(config.random_seed);

  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : repr) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string dataset_id(const RunConfig& config) {
  if (config.generate) {
    const auto& g = *config.generate;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "gen:n=%zu,avg=%g,exp=%g,seed=%llu", g.n, g.avg, g.exponent,
                  static_cast<unsigned long long>(g.seed));
    return buf;
  }
  return config.input_path;
}

namespace {

Graph load_graph(const RunConfig& config) {
  if (config.generate) {
    const auto& spec = *config.generate;
    return generate_power_law_graph(spec.n, spec.avg, spec.exponent, spec.seed);
  }
  std::ifstream in(config.input_path);
  if (!in) throw ConfigError("cannot open input file " + config.input_path);
  return load_edge_list(in);
}

std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      (std::numeric_limits<std::uint64_t>::max() % bound + 1) % bound;
  for (;;) {
    std::uint64_t v = rng();
    if (v <= limit) return v % bound;
  }
}

// Deterministic stand-in seed labels when no file is given: a fixed fraction
// of vertices gets a one-hot label drawn from the run seed.
SeedLabelMap synthesize_seeds(const Graph& g, std::size_t num_classes, double fraction,
                              std::uint64_t random_seed) {
  SeedLabelMap seeds;
  auto ids = g.vertex_ids();
  auto count = static_cast<std::size_t>(fraction * static_cast<double>(ids.size()));
  if (count == 0) return seeds;
  std::mt19937_64 rng(random_seed ^ 0x5eedULL);
  std::vector<VertexId> pool(ids.begin(), ids.end());
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + bounded_rand(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
    std::vector<double> label(num_classes, 0.0);
    label[bounded_rand(rng, num_classes)] = 1.0;
    seeds[pool[i]] = std::move(label);
  }
  return seeds;
}

SeedLabelMap resolve_seeds(const RunConfig& config, const Graph& g) {
  if (!config.seed_label_path.empty()) {
    std::ifstream in(config.seed_label_path);
    if (!in) throw ConfigError("cannot open seed-label file " + config.seed_label_path);
    return load_seed_labels(in, config.num_classes, &g).labels;
  }
  return synthesize_seeds(g, config.num_classes, config.rip_seed_fraction, config.random_seed);
}

std::filesystem::path resolve_dfs_root(const RunConfig& config) {
  if (!config.dfs_root.empty()) return config.dfs_root;
  if (const char* env = std::getenv("GRAPHMILL_DFS_ROOT"); env != nullptr && *env != '\0')
    return env;
  return std::filesystem::temp_directory_path() / "graphmill-dfs";
}

std::string fresh_run_prefix(const RunConfig& config) {
  static std::atomic<std::uint64_t> counter{0};
  return config_hash(config) + "-" + std::to_string(counter.fetch_add(1));
}

void write_states_tsv(std::ostream& out, const StateVector<SsspProgram>& states) {
  for (const auto& [id, state] : states) {
    if (state.distance == kInfiniteDistance)
      out << id << "\tINF\n";
    else
      out << id << '\t' << state.distance << '\n';
  }
}

void write_states_tsv(std::ostream& out, const StateVector<RipProgram>& states) {
  char buf[64];
  for (const auto& [id, state] : states) {
    std::size_t argmax = 0;
    for (std::size_t c = 1; c < state.likelihood.size(); ++c)
      if (state.likelihood[c] > state.likelihood[argmax]) argmax = c;
    out << id << '\t' << argmax << '\t';
    for (std::size_t c = 0; c < state.likelihood.size(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", state.likelihood[c]);
      out << (c > 0 ? " " : "") << buf;
    }
    out << '\n';
  }
}

template <class Prog>
RunResult<Prog> dispatch_engine(const RunConfig& config, const Graph& g, const Prog& program,
                                WorkerPool& pool, SimulatedDfs& dfs,
                                const std::string& run_prefix) {
  switch (config.engine) {
    case EngineKind::kMapReduce: {
      MrOptions options;
      options.iterations = config.iterations;
      options.use_combiner = config.use_combiner;
      options.keep_files = config.keep_dfs;
      options.run_prefix = run_prefix;
      options.cost = config.cost;
      return run_mapreduce(g, program, pool, dfs, options);
    }
    case EngineKind::kMapSideJoin: {
      Mr2Options options;
      options.iterations = config.iterations;
      options.use_combiner = config.use_combiner;
      options.keep_files = config.keep_dfs;
      options.run_prefix = run_prefix;
      options.cost = config.cost;
      return run_mapside_join(g, program, pool, dfs, options);
    }
    case EngineKind::kBsp: {
      BspOptions options;
      options.max_supersteps = config.iterations;
      options.use_combiner = config.use_combiner;
      options.memory_budget_bytes = config.memory_budget_bytes;
      options.cost = config.cost;
      return run_bsp(g, program, pool, options);
    }
  }
  throw ConfigError("unknown engine");
}

RunMetrics execute_run(const RunConfig& config) {
  Graph g = load_graph(config);
  WorkerPool pool(config.workers);
  SimulatedDfs dfs(resolve_dfs_root(config), config.cost);
  std::string run_prefix = fresh_run_prefix(config);

  std::filesystem::create_directories(config.output_dir);
  std::ofstream states_out(config.output_dir / "states.tsv",
                           std::ios::binary | std::ios::trunc);
  if (!states_out) throw ConfigError("cannot write to output directory " +
                                     config.output_dir.string());

  RunMetrics metrics;
  if (config.algorithm == AlgorithmKind::kSssp) {
    SsspProgram program(g, config.source);
    auto result = dispatch_engine(config, g, program, pool, dfs, run_prefix);
    write_states_tsv(states_out, result.states);
    metrics = std::move(result.metrics);
  } else {
    RipProgram program(resolve_seeds(config, g), config.num_classes, config.clamp_seeds);
    auto result = dispatch_engine(config, g, program, pool, dfs, run_prefix);
    write_states_tsv(states_out, result.states);
    metrics = std::move(result.metrics);
  }
  states_out.close();

  metrics.run_id = config_hash(config);
  metrics.dataset = dataset_id(config);

  std::ofstream csv_out(config.output_dir / "metrics.csv", std::ios::binary | std::ios::trunc);
  export_csv({&metrics, 1}, csv_out);
  return metrics;
}

int classify_exit_code(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) != nullptr) return kExitConfigError;
  if (dynamic_cast<const ParseError*>(&e) != nullptr) return kExitConfigError;
  if (dynamic_cast<const CapacityError*>(&e) != nullptr) return kExitCapacityError;
  return kExitEngineFault;
}

}  // namespace

RunOutcome run_single(const RunConfig& config) {
  RunOutcome outcome;
  try {
    validate_config(config);
    outcome.metrics = execute_run(config);
  } catch (const std::exception& e) {
    outcome.exit_code = classify_exit_code(e);
    outcome.error = e.what();
  }
  return outcome;
}

RunOutcome run_sweep(const RunConfig& base, const std::vector<std::uint32_t>& workers,
                     const std::vector<EngineKind>& engines) {
  RunOutcome outcome;
  if (workers.empty() || engines.empty()) {
    outcome.exit_code = kExitConfigError;
    outcome.error = "sweep needs non-empty worker and engine lists";
    return outcome;
  }

  std::filesystem::create_directories(base.output_dir);
  std::ofstream failures(base.output_dir / "failures.tsv", std::ios::trunc);
  std::vector<RunMetrics> all;
  for (EngineKind engine : engines) {
    for (std::uint32_t w : workers) {
      RunConfig config = base;
      config.engine = engine;
      config.workers = w;
      config.output_dir =
          base.output_dir / ("run-" + to_string(engine) + "-w" + std::to_string(w));
      RunOutcome one = run_single(config);
      if (one.exit_code == kExitOk) {
        all.push_back(std::move(one.metrics));
      } else {
        failures << to_string(engine) << '\t' << w << '\t' << one.exit_code << '\t' << one.error
                 << '\n';
        if (outcome.exit_code == kExitOk) {
          outcome.exit_code = one.exit_code;
          outcome.error = one.error;
        }
      }
    }
  }
  std::ofstream csv_out(base.output_dir / "metrics.csv", std::ios::binary | std::ios::trunc);
  export_csv(all, csv_out);
  return outcome;
}

}  // namespace graphmill
