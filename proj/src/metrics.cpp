#include "graphmill/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "graphmill/errors.hpp"

namespace graphmill {

double mean_iteration_time_ms(const RunMetrics& run, bool skip_first) {
  std::size_t first = skip_first ? 1 : 0;
  if (run.iterations.size() <= first)
    throw ConfigError("mean_iteration_time needs at least " + std::to_string(first + 1) +
                      " recorded iterations");
  double sum = 0.0;
  for (std::size_t i = first; i < run.iterations.size(); ++i) sum += run.iterations[i].wall_ms;
  return sum / static_cast<double>(run.iterations.size() - first);
}

LinearFit fit_linear(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw ConfigError("fit_linear needs at least 3 points");
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& [x, y] : points) {
    mean_x += x;
    mean_y += y;
  }
  mean_x /= static_cast<double>(points.size());
  mean_y /= static_cast<double>(points.size());

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mean_x) * (x - mean_x);
    sxy += (x - mean_x) * (y - mean_y);
    syy += (y - mean_y) * (y - mean_y);
  }
  if (sxx == 0.0) throw ConfigError("fit_linear needs at least two distinct x values");

  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  if (syy == 0.0) {
    fit.r_squared = 1.0;
    fit.zero_variance = true;
    return fit;
  }
  double ss_res = 0.0;
  for (const auto& [x, y] : points) {
    double r = y - (fit.intercept + fit.slope * x);
    ss_res += r * r;
  }
  fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

namespace {

void append_csv_field(std::string& row, const std::string& field) {
  if (!row.empty()) row += ',';
  if (field.find_first_of(",\"\r\n") != std::string::npos) {
    row += '"';
    for (char c : field) {
      row += c;
      if (c == '"') row += '"';
    }
    row += '"';
  } else {
    row += field;
  }
}

std::string format_wall_ms(double ms) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", ms);
  return buf;
}

}  // namespace

std::uint64_t export_csv(std::span<const RunMetrics> runs, std::ostream& out) {
  std::string text =
      "run_id,engine,algorithm,dataset,workers,iteration,wall_ms,msg_count,msg_bytes,"
      "structure_bytes,dfs_read_bytes,dfs_write_bytes,active_vertices\r\n";
  for (const RunMetrics& run : runs) {
    for (const IterationMetrics& it : run.iterations) {
      std::string row;
      append_csv_field(row, run.run_id);
      append_csv_field(row, run.engine);
      append_csv_field(row, run.algorithm);
      append_csv_field(row, run.dataset);
      append_csv_field(row, std::to_string(run.workers));
      append_csv_field(row, std::to_string(it.iteration));
      append_csv_field(row, format_wall_ms(it.wall_ms));
      append_csv_field(row, std::to_string(it.msg_count));
      append_csv_field(row, std::to_string(it.msg_bytes));
      append_csv_field(row, std::to_string(it.structure_bytes));
      append_csv_field(row, std::to_string(it.dfs_read_bytes));
      append_csv_field(row, std::to_string(it.dfs_write_bytes));
      append_csv_field(row, std::to_string(it.active_vertices));
      text += row;
      text += "\r\n";
    }
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DfsError("csv export write failed");
  return text.size();
}

}  // namespace graphmill
