#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "blindep/experiment.hpp"
#include "blindep/io.hpp"

using namespace blindep;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.n = 24;
  cfg.k = 2;
  cfg.alpha_grid = {0.7, 1.0};
  cfg.s_grid = {50, 100};
  cfg.trials = 2;
  cfg.master_seed = 11;
  cfg.kmeans_restarts = 4;
  cfg.max_quotient_degree = 3;
  cfg.threads = 1;
  return cfg;
}

// Drops the runtime column, the only field allowed to differ between runs.
std::string strip_runtime(const std::string& csv) {
  std::string out;
  std::size_t start = 0;
  while (start < csv.size()) {
    std::size_t end = csv.find('\n', start);
    if (end == std::string::npos) end = csv.size();
    const std::string line = csv.substr(start, end - start);
    std::vector<std::string> fields;
    std::size_t from = 0;
    for (;;) {
      const std::size_t comma = line.find(',', from);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(from));
        break;
      }
      fields.push_back(line.substr(from, comma - from));
      from = comma + 1;
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i == 7) continue;
      if (!out.empty() && out.back() != '\n') out += ',';
      out += fields[i];
    }
    out += '\n';
    start = end + 1;
  }
  return out;
}

}  // namespace

TEST_CASE("both fixture graphs pass their frozen checks", "[experiment]") {
  FixtureReport report = run_fixtures();
  for (const std::string& line : report.lines) INFO(line);
  CHECK(report.all_ok);
  CHECK(report.lines.size() == 8);
}

TEST_CASE("sweeps emit one row per grid cell trial and algorithm", "[experiment]") {
  const ExperimentConfig cfg = tiny_config();
  const std::vector<MetricRow> rows = run_sweep(cfg);
  REQUIRE(rows.size() == 2 * 2 * 2 * 2);

  std::size_t r = 0;
  for (double alpha : cfg.alpha_grid)
    for (int s : cfg.s_grid)
      for (int trial = 0; trial < cfg.trials; ++trial)
        for (const std::string& algorithm : cfg.algorithms) {
          CAPTURE(r);
          CHECK(rows[r].alpha == alpha);
          CHECK(rows[r].s == s);
          CHECK(rows[r].trial == trial);
          CHECK(rows[r].algorithm == algorithm);
          CHECK((rows[r].accuracy == 0 || rows[r].accuracy == 1));
          CHECK(rows[r].node_cost >= -1e-9);
          CHECK(rows[r].runtime_ms >= 0.0);
          ++r;
        }

  // The two algorithm rows of one trial share the drawn model and its seed.
  for (std::size_t i = 0; i + 1 < rows.size(); i += 2) CHECK(rows[i].seed == rows[i + 1].seed);
}

TEST_CASE("sweeps are reproducible and thread count independent", "[experiment]") {
  ExperimentConfig cfg = tiny_config();
  const std::vector<MetricRow> first = run_sweep(cfg);
  const std::vector<MetricRow> second = run_sweep(cfg);
  cfg.threads = 3;
  const std::vector<MetricRow> threaded = run_sweep(cfg);

  REQUIRE(first.size() == second.size());
  REQUIRE(first.size() == threaded.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    for (const std::vector<MetricRow>* other : {&second, &threaded}) {
      const MetricRow& a = first[i];
      const MetricRow& b = (*other)[i];
      CHECK(a.trial == b.trial);
      CHECK(a.seed == b.seed);
      CHECK(a.alpha == b.alpha);
      CHECK(a.s == b.s);
      CHECK(a.algorithm == b.algorithm);
      CHECK(a.accuracy == b.accuracy);
      CHECK(a.node_cost == b.node_cost);
      CHECK(a.flags == b.flags);
    }
  }
}

TEST_CASE("a frozen sweep matches its stored csv", "[experiment]") {
  ExperimentConfig cfg;
  cfg.n = 12;
  cfg.k = 2;
  cfg.alpha_grid = {1.0};
  cfg.s_grid = {30};
  cfg.trials = 2;
  cfg.master_seed = 7;
  cfg.kmeans_restarts = 4;
  cfg.max_quotient_degree = 2;
  cfg.threads = 1;

  const std::string expected = read_text_file(std::string(BLINDEP_TEST_DATA_DIR) +
                                              "/golden_sweep.csv");
  CHECK(strip_runtime(metrics_to_csv(run_sweep(cfg))) == expected);
}

TEST_CASE("a zero component budget defers to the class count", "[experiment]") {
  ExperimentConfig cfg = tiny_config();
  CHECK(cfg.robust.max_components == 0);
  CHECK(cfg.effective_robust().max_components == cfg.k);
  cfg.robust.max_components = 9;
  CHECK(cfg.effective_robust().max_components == 9);
}

TEST_CASE("config validation catches inconsistent grids", "[experiment]") {
  ExperimentConfig cfg = tiny_config();
  cfg.n = 10;
  cfg.k = 4;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg = tiny_config();
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg = tiny_config();
  cfg.alpha_grid = {1.5};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg = tiny_config();
  cfg.s_grid = {};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg = tiny_config();
  cfg.algorithms = {"newton"};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg = tiny_config();
  cfg.max_quotient_degree = cfg.n / cfg.k;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg = tiny_config();
  cfg.kmeans_restarts = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("concentration runs need a grid that can show a decay law", "[experiment]") {
  ExperimentConfig cfg = tiny_config();
  cfg.alpha_grid = {0.7};
  cfg.trials = 3;

  cfg.s_grid = {100, 10000};
  CHECK_THROWS_AS(concentration_diagnostic(cfg), std::invalid_argument);

  cfg.s_grid = {100, 200, 300};
  CHECK_THROWS_AS(concentration_diagnostic(cfg), std::invalid_argument);
}

TEST_CASE("sample covariance error decays with a negative power of s", "[experiment]") {
  ExperimentConfig cfg;
  cfg.n = 12;
  cfg.k = 2;
  cfg.alpha_grid = {0.7};
  cfg.s_grid = {20, 200, 2000};
  cfg.trials = 3;
  cfg.master_seed = 4;
  cfg.max_quotient_degree = 2;
  cfg.threads = 1;

  ConcentrationReport report = concentration_diagnostic(cfg);
  REQUIRE(report.points.size() == 3);
  CHECK(report.alpha == 0.7);
  CHECK(report.trials == 3);
  for (std::size_t i = 1; i < report.points.size(); ++i)
    CHECK(report.points[i].median_error < report.points[i - 1].median_error);
  CHECK(report.slope < -0.2);
  CHECK(report.slope > -1.0);
  CHECK(report.median_eigengap > 0.0);
  CHECK(report.min_eigengap >= 0.0);
  CHECK(report.min_mixed_eigengap <= report.median_mixed_eigengap);
  CHECK((report.gap_violations == 0) == (report.min_mixed_eigengap > 0.0));
  CHECK(report.gap_violations <= static_cast<int>(cfg.s_grid.size()) * cfg.trials);
  CHECK(report.median_effective_rank >= 1.0);

  nlohmann::json j = concentration_report_to_json(report);
  CHECK(j["points"].size() == 3);
  CHECK(j["slope"] == report.slope);
  CHECK(j["min_mixed_eigengap"] == report.min_mixed_eigengap);
  CHECK(j["gap_violations"] == report.gap_violations);
}

TEST_CASE("medians interpolate even sized lists", "[experiment]") {
  CHECK(detail::median_of({3.0, 1.0, 2.0}) == 2.0);
  CHECK(detail::median_of({4.0, 1.0, 3.0, 2.0}) == 2.5);
}
