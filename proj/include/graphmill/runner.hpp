#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "graphmill/dfs.hpp"
#include "graphmill/graph.hpp"
#include "graphmill/metrics.hpp"

namespace graphmill {

enum class EngineKind { kMapReduce, kMapSideJoin, kBsp };
enum class AlgorithmKind { kSssp, kRip };

std::string to_string(EngineKind e);
std::string to_string(AlgorithmKind a);
EngineKind parse_engine(const std::string& name);        // throws ConfigError
AlgorithmKind parse_algorithm(const std::string& name);  // throws ConfigError

struct GeneratorSpec {
  std::size_t n = 0;
  double avg = 4.0;
  double exponent = 2.5;
  std::uint64_t seed = 42;
};

// Parses "n=1000,avg=4,exp=2.5,seed=42" (n mandatory, the rest optional).
GeneratorSpec parse_generator_spec(const std::string& spec);

// Exit codes shared by run_single, run_sweep, and the CLI binary.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitCapacityError = 3;
inline constexpr int kExitEngineFault = 4;

struct RunConfig {
  EngineKind engine = EngineKind::kMapReduce;
  AlgorithmKind algorithm = AlgorithmKind::kSssp;

  std::string input_path;  // edge-list file; mutually exclusive with generate
  std::optional<GeneratorSpec> generate;

  std::uint32_t workers = 1;
  std::size_t iterations = 10;

  VertexId source = 0;  // sssp

  std::string seed_label_path;  // rip; synthesized from the run seed if empty
  std::size_t num_classes = 2;
  double rip_seed_fraction = 0.1;
  bool clamp_seeds = true;

  bool use_combiner = false;
  std::uint64_t memory_budget_bytes = 0;  // bsp; 0 = unlimited
  CostModel cost;
  std::uint64_t random_seed = 42;

  std::filesystem::path output_dir;
  std::filesystem::path dfs_root;  // empty: $GRAPHMILL_DFS_ROOT or system temp
  bool keep_dfs = false;
};

// Rejects invalid flag combinations before any work. Throws ConfigError.
void validate_config(const RunConfig& config);

// 16-hex-digit FNV-1a hash of the semantic config fields; embedded as run_id
// in every CSV row so results are self-describing.
std::string config_hash(const RunConfig& config);

std::string dataset_id(const RunConfig& config);

struct RunOutcome {
  int exit_code = kExitOk;
  std::string error;
  RunMetrics metrics;
};

// Executes one run and writes metrics.csv + states.tsv into output_dir.
RunOutcome run_single(const RunConfig& config);

// Cartesian product of engines x worker counts under the base config. Each
// run gets a subdirectory; a combined metrics.csv lands in base.output_dir,
// failures are recorded in failures.tsv and the sweep continues.
RunOutcome run_sweep(const RunConfig& base, const std::vector<std::uint32_t>& workers,
                     const std::vector<EngineKind>& engines);

}  // namespace graphmill
