#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "graphmill/ledger.hpp"

namespace graphmill {

// One row per phase boundary. Row 0 is setup (MR initial vertex-record write,
// MR2 split, BSP load); rows 1..k are algorithm iterations / supersteps.
struct IterationMetrics {
  std::size_t iteration = 0;
  double wall_ms = 0.0;
  std::uint64_t msg_count = 0;
  std::uint64_t msg_bytes = 0;
  std::uint64_t structure_bytes = 0;
  std::uint64_t dfs_read_bytes = 0;
  std::uint64_t dfs_write_bytes = 0;
  std::uint64_t active_vertices = 0;
};

struct RunMetrics {
  std::string run_id;
  std::string engine;
  std::string algorithm;
  std::string dataset;
  std::uint32_t workers = 1;
  std::vector<IterationMetrics> iterations;
  double total_wall_ms = 0.0;
};

// Arithmetic mean of per-row wall time. skip_first excludes the
// setup-dominated row 0 (the load-heavy "first iteration").
double mean_iteration_time_ms(const RunMetrics& run, bool skip_first = false);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  // y had zero variance: the fit is an exact horizontal line and r_squared
  // is reported as 1.0 by convention.
  bool zero_variance = false;
};

// Ordinary least squares over (x, y) points. Needs >= 3 points with at least
// two distinct x values.
LinearFit fit_linear(std::span<const std::pair<double, double>> points);

// Stable column order:
//   run_id,engine,algorithm,dataset,workers,iteration,wall_ms,msg_count,
//   msg_bytes,structure_bytes,dfs_read_bytes,dfs_write_bytes,active_vertices
// RFC-4180 quoting; one row per (run, iteration). Returns bytes written.
std::uint64_t export_csv(std::span<const RunMetrics> runs, std::ostream& out);

}  // namespace graphmill
