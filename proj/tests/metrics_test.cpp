#include <doctest.h>

#include <sstream>

#include "graphmill/metrics.hpp"
#include "graphmill/errors.hpp"
#include "test_util.hpp"

using namespace graphmill;

namespace {

RunMetrics sample_run(std::initializer_list<double> walls) {
  RunMetrics run;
  run.run_id = "deadbeef00000000";
  run.engine = "mr";
  run.algorithm = "sssp";
  run.dataset = "gen:n=100,avg=4,exp=2.5,seed=1";
  run.workers = 4;
  std::size_t i = 0;
  for (double w : walls) {
    IterationMetrics row;
    row.iteration = i++;
    row.wall_ms = w;
    row.msg_count = 10 * i;
    row.msg_bytes = 100 * i;
    row.structure_bytes = 7;
    row.dfs_read_bytes = 1000 + i;
    row.dfs_write_bytes = 2000 + i;
    row.active_vertices = 5;
    run.iterations.push_back(row);
    run.total_wall_ms += w;
  }
  return run;
}

// Minimal RFC-4180 reader for round-trip checks.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\r') {
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
    } else {
      field += c;
    }
  }
  return rows;
}

}  // namespace

TEST_CASE("mean iteration time with and without the setup row") {
  RunMetrics flat = sample_run({100, 100, 100});
  CHECK(mean_iteration_time_ms(flat) == 100);

  RunMetrics loaded = sample_run({300, 100, 100});
  CHECK(mean_iteration_time_ms(loaded, true) == 100);
  CHECK(mean_iteration_time_ms(loaded, false) == doctest::Approx(500.0 / 3));

  RunMetrics empty;
  CHECK_THROWS_AS(mean_iteration_time_ms(empty), ConfigError);
  RunMetrics single = sample_run({50});
  CHECK_THROWS_AS(mean_iteration_time_ms(single, true), ConfigError);
}

TEST_CASE("mean iteration time matches a spreadsheet-style recompute of the CSV") {
  RunMetrics run = sample_run({211.5, 103.25, 99.75, 104.5});
  std::ostringstream csv;
  export_csv({&run, 1}, csv);
  auto rows = parse_csv(csv.str());
  REQUIRE(rows.size() == 5);
  double sum = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) sum += std::stod(rows[i][6]);
  CHECK(mean_iteration_time_ms(run) == doctest::Approx(sum / 4));
}

TEST_CASE("fit_linear recovers an exact line") {
  std::vector<std::pair<double, double>> points{{1, 10}, {2, 20}, {3, 30}};
  LinearFit fit = fit_linear(points);
  CHECK(fit.slope == doctest::Approx(10.0));
  CHECK(fit.intercept == doctest::Approx(0.0));
  CHECK(fit.r_squared == 1.0);
  CHECK(!fit.zero_variance);
}

TEST_CASE("fit_linear flags a constant series as zero-variance with r-squared one") {
  std::vector<std::pair<double, double>> points{{1, 10}, {2, 10}, {3, 10}};
  LinearFit fit = fit_linear(points);
  CHECK(fit.slope == doctest::Approx(0.0));
  CHECK(fit.r_squared == 1.0);
  CHECK(fit.zero_variance);
}

TEST_CASE("fit_linear rejects degenerate inputs") {
  std::vector<std::pair<double, double>> two{{1, 10}, {2, 20}};
  CHECK_THROWS_AS(fit_linear(two), ConfigError);
  std::vector<std::pair<double, double>> same_x{{2, 10}, {2, 20}, {2, 30}};
  CHECK_THROWS_AS(fit_linear(same_x), ConfigError);
}

TEST_CASE("fit_linear of noisy data keeps r-squared in range") {
  std::mt19937_64 rng(5);
  std::vector<std::pair<double, double>> points;
  for (int i = 0; i < 20; ++i)
    points.emplace_back(i, 3.0 * i + 2.0 + (test::unit_rand(rng) - 0.5));
  LinearFit fit = fit_linear(points);
  CHECK(fit.r_squared >= 0.0);
  CHECK(fit.r_squared <= 1.0);
  CHECK(fit.slope == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("export_csv writes header plus one row per iteration") {
  RunMetrics run = sample_run({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  std::ostringstream out;
  std::uint64_t bytes = export_csv({&run, 1}, out);
  CHECK(bytes == out.str().size());
  auto rows = parse_csv(out.str());
  REQUIRE(rows.size() == 11);
  CHECK(rows[0][0] == "run_id");
  CHECK(rows[0][12] == "active_vertices");
}

TEST_CASE("export_csv is deterministic and quotes fields with commas") {
  RunMetrics run = sample_run({12.5, 8.25});
  std::ostringstream a, b;
  export_csv({&run, 1}, a);
  export_csv({&run, 1}, b);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("\"gen:n=100,avg=4,exp=2.5,seed=1\"") != std::string::npos);
}

TEST_CASE("parsing exported csv recovers every counter exactly") {
  RunMetrics run = sample_run({10.125, 20.5, 30.75});
  std::ostringstream out;
  export_csv({&run, 1}, out);
  auto rows = parse_csv(out.str());
  REQUIRE(rows.size() == run.iterations.size() + 1);
  for (std::size_t i = 0; i < run.iterations.size(); ++i) {
    const auto& row = rows[i + 1];
    const auto& it = run.iterations[i];
    CHECK(row[0] == run.run_id);
    CHECK(row[1] == run.engine);
    CHECK(row[2] == run.algorithm);
    CHECK(row[3] == run.dataset);
    CHECK(std::stoul(row[4]) == run.workers);
    CHECK(std::stoull(row[5]) == it.iteration);
    CHECK(std::stod(row[6]) == doctest::Approx(it.wall_ms).epsilon(1e-9));
    CHECK(std::stoull(row[7]) == it.msg_count);
    CHECK(std::stoull(row[8]) == it.msg_bytes);
    CHECK(std::stoull(row[9]) == it.structure_bytes);
    CHECK(std::stoull(row[10]) == it.dfs_read_bytes);
    CHECK(std::stoull(row[11]) == it.dfs_write_bytes);
    CHECK(std::stoull(row[12]) == it.active_vertices);
  }
}
