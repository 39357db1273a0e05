#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "blindep/config_model.hpp"
#include "blindep/eig.hpp"
#include "blindep/graph.hpp"
#include "blindep/matrix.hpp"
#include "blindep/metrics.hpp"
#include "blindep/oracle.hpp"
#include "blindep/parallel.hpp"
#include "blindep/partition.hpp"
#include "blindep/refine.hpp"
#include "blindep/robust.hpp"
#include "blindep/seeds.hpp"
#include "blindep/signal.hpp"
#include "blindep/spectral.hpp"

namespace blindep {

inline constexpr const char* kAlgorithmSpectral = "spectral";
inline constexpr const char* kAlgorithmRobust = "robust";

// Full description of a recovery experiment: a grid over mixing strengths
// and sample counts, with a number of independently drawn planted graphs per
// grid cell. Classes are equal-sized, so n must be divisible by k.
struct ExperimentConfig {
  int n = 120;
  int k = 4;
  std::vector<double> alpha_grid = {0.7};
  std::vector<int> s_grid = {100, 300, 1000, 3000};
  int trials = 50;
  std::uint64_t master_seed = 1;
  FilterSpec filter = identity_filter();
  std::vector<std::string> algorithms = {kAlgorithmSpectral, kAlgorithmRobust};
  int kmeans_restarts = 10;
  // max_components = 0 defers to k, since the evaluation protocol hands the
  // class count to both algorithms.
  RobustConfig robust{0, 1e-6, 3, ComponentSelection::kBic};
  int max_quotient_degree = 4;
  GenConfig gen;
  unsigned threads = 0;  // 0 = all hardware threads
  int max_planted_redraws = 50;

  void validate() const {
    if (n <= 0 || k <= 0 || n % k != 0)
      throw std::invalid_argument("ExperimentConfig: n must be a positive multiple of k");
    if (trials <= 0) throw std::invalid_argument("ExperimentConfig: trials must be positive");
    if (alpha_grid.empty() || s_grid.empty())
      throw std::invalid_argument("ExperimentConfig: empty grid");
    for (double a : alpha_grid)
      if (!(a >= 0.0 && a <= 1.0))
        throw std::invalid_argument("ExperimentConfig: alpha outside [0, 1]");
    for (int s : s_grid)
      if (s <= 0) throw std::invalid_argument("ExperimentConfig: sample counts must be positive");
    if (algorithms.empty()) throw std::invalid_argument("ExperimentConfig: no algorithms");
    for (const std::string& a : algorithms)
      if (a != kAlgorithmSpectral && a != kAlgorithmRobust)
        throw std::invalid_argument("ExperimentConfig: unknown algorithm '" + a + "'");
    filter.validate();
    if (max_quotient_degree < 0 || max_quotient_degree >= n / k)
      throw std::invalid_argument("ExperimentConfig: max_quotient_degree out of range");
    if (kmeans_restarts <= 0)
      throw std::invalid_argument("ExperimentConfig: kmeans_restarts must be positive");
  }

  RobustConfig effective_robust() const {
    RobustConfig r = robust;
    if (r.max_components <= 0) r.max_components = k;
    return r;
  }
};

// One measurement: a single algorithm on a single trial of a grid cell.
struct MetricRow {
  int trial = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  int s = 0;
  std::string algorithm;
  int accuracy = 0;
  double node_cost = 0.0;
  double runtime_ms = 0.0;
  std::string flags;  // '|'-joined markers, empty when the trial was clean
};

namespace detail {

struct TrialDraw {
  Graph graph;
  Partition planted;
  int redraws = 0;
  bool compatible = true;
};

// Draws a planted model for one trial. A draw is only kept when the filter
// does not blur the planted classes (which also means the planted partition
// is the coarsest equitable one under f); incompatible draws are redrawn
// with fresh derived seeds, and after the cap the last draw is kept and
// flagged so a sweep degrades loudly instead of aborting.
inline TrialDraw draw_planted_model(const ExperimentConfig& cfg, std::uint64_t trial_seed) {
  const std::vector<int> sizes(static_cast<std::size_t>(cfg.k), cfg.n / cfg.k);
  TrialDraw draw;
  for (int attempt = 0;; ++attempt) {
    PlantedSpec spec;
    spec.class_sizes = sizes;
    spec.quotient_degrees = sample_quotient_degrees(
        sizes, cfg.max_quotient_degree,
        derive_seed(trial_seed, {1, static_cast<std::uint64_t>(attempt)}));
    PlantedGraph pg = sample_graph(
        spec, cfg.gen, derive_seed(trial_seed, {2, static_cast<std::uint64_t>(attempt)}));
    draw.graph = std::move(pg.graph);
    draw.planted = std::move(pg.partition);
    draw.redraws = attempt;
    SignalModel probe{draw.graph, draw.planted, 1.0, cfg.filter};
    draw.compatible = filter_compatible(probe);
    if (draw.compatible || attempt >= cfg.max_planted_redraws) return draw;
  }
}

inline std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const std::string& f : flags) {
    if (!out.empty()) out += '|';
    out += f;
  }
  return out;
}

}  // namespace detail

// Runs the whole grid. Row order is fixed (alpha, then s, then trial, then
// algorithm) and every random decision is derived from the master seed and
// the row's coordinates, so two runs produce identical rows apart from the
// runtime column, regardless of the thread count.
inline std::vector<MetricRow> run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t cells = cfg.alpha_grid.size() * cfg.s_grid.size();
  const std::size_t per_trial = cfg.algorithms.size();
  const std::size_t total_trials = cells * static_cast<std::size_t>(cfg.trials);
  std::vector<MetricRow> rows(total_trials * per_trial);
  const RobustConfig robust_cfg = cfg.effective_robust();

  parallel_for(total_trials, cfg.threads, [&](std::size_t flat) {
    const std::size_t cell = flat / cfg.trials;
    const int trial = static_cast<int>(flat % cfg.trials);
    const std::size_t a_idx = cell / cfg.s_grid.size();
    const std::size_t s_idx = cell % cfg.s_grid.size();
    const double alpha = cfg.alpha_grid[a_idx];
    const int s = cfg.s_grid[s_idx];
    const std::uint64_t trial_seed =
        detail::derive_seed(cfg.master_seed, {detail::kStreamTrial, a_idx, s_idx,
                                              static_cast<std::uint64_t>(trial)});

    const detail::TrialDraw draw = detail::draw_planted_model(cfg, trial_seed);
    SignalModel model{draw.graph, draw.planted, alpha, cfg.filter};
    const SampleSet samples = generate_samples(model, s, detail::derive_seed(trial_seed, {3}));
    const Matrix cov = sample_covariance(samples);
    const Matrix basis = node_cost_basis(draw.graph, draw.planted, cfg.filter);

    std::vector<std::string> base_flags;
    if (draw.redraws > 0) base_flags.push_back("redraws:" + std::to_string(draw.redraws));
    if (!draw.compatible) base_flags.push_back("incompatible");

    for (std::size_t algo = 0; algo < per_trial; ++algo) {
      MetricRow& row = rows[flat * per_trial + algo];
      row.trial = trial;
      row.seed = trial_seed;
      row.alpha = alpha;
      row.s = s;
      row.algorithm = cfg.algorithms[algo];
      std::vector<std::string> flags = base_flags;

      const auto t0 = std::chrono::steady_clock::now();
      Partition found;
      if (row.algorithm == kAlgorithmSpectral) {
        found = spectral_extract(cov, cfg.k, cfg.kmeans_restarts,
                                 detail::derive_seed(trial_seed, {4}));
      } else {
        const RobustResult rr =
            robust_blind_wl(matrix_oracle(cov), robust_cfg, detail::derive_seed(trial_seed, {5}));
        found = rr.partition;
        if (!rr.converged) flags.push_back("nonconverged");
      }
      const auto t1 = std::chrono::steady_clock::now();

      row.accuracy = graph_accuracy(found, draw.planted);
      row.node_cost = node_cost_from_basis(basis, found);
      row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      row.flags = detail::join_flags(flags);
    }
  });
  return rows;
}

struct ConcentrationPoint {
  int s = 0;
  double median_error = 0.0;  // median over trials of || cov_hat - cov ||_2
  double mean_error = 0.0;
};

struct ConcentrationReport {
  std::vector<ConcentrationPoint> points;
  double slope = 0.0;  // least squares slope of log10(median error) vs log10(s)
  double median_eigengap = 0.0;
  double min_eigengap = 0.0;
  // Gap between the k-th population eigenvalue and the (k+1)-th sample
  // eigenvalue. The subspace recovery guarantee needs this mixed gap to stay
  // positive with room to spare; when a draw closes it, no margin works.
  double median_mixed_eigengap = 0.0;
  double min_mixed_eigengap = 0.0;
  int gap_violations = 0;  // draws whose mixed gap was not positive
  double median_effective_rank = 0.0;
  double alpha = 0.0;
  int trials = 0;
};

namespace detail {

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

// Measures how fast the sample covariance approaches the population one as
// the sample count grows. Requires a grid that can actually show a decay
// law: at least three sample counts spanning two orders of magnitude. Also
// reports the eigengap at the subspace cut, both the population version and
// the mixed one against the sample spectrum, and the effective rank of the
// population covariance across the drawn models, the quantities that drive
// the recovery bound.
inline ConcentrationReport concentration_diagnostic(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.s_grid.size() < 3)
    throw std::invalid_argument("concentration_diagnostic: need at least 3 sample counts");
  const auto [mn, mx] = std::minmax_element(cfg.s_grid.begin(), cfg.s_grid.end());
  if (*mx < 100 * *mn)
    throw std::invalid_argument(
        "concentration_diagnostic: sample counts must span at least two decades");

  const double alpha = cfg.alpha_grid.front();
  ConcentrationReport report;
  report.alpha = alpha;
  report.trials = cfg.trials;

  const std::size_t total = cfg.s_grid.size() * static_cast<std::size_t>(cfg.trials);
  std::vector<double> errors(total, 0.0);
  std::vector<double> gaps(total, 0.0);
  std::vector<double> mixed_gaps(total, 0.0);
  std::vector<double> ranks(total, 0.0);
  parallel_for(total, cfg.threads, [&](std::size_t flat) {
    const std::size_t s_idx = flat / cfg.trials;
    const int trial = static_cast<int>(flat % cfg.trials);
    const int s = cfg.s_grid[s_idx];
    const std::uint64_t trial_seed = detail::derive_seed(
        cfg.master_seed, {detail::kStreamTrial, 0, s_idx, static_cast<std::uint64_t>(trial)});
    const detail::TrialDraw draw = detail::draw_planted_model(cfg, trial_seed);
    SignalModel model{draw.graph, draw.planted, alpha, cfg.filter};
    const Matrix cov = exact_covariance(model);
    const SampleSet samples = generate_samples(model, s, detail::derive_seed(trial_seed, {3}));
    const Matrix cov_hat = sample_covariance(samples);
    errors[flat] = spectral_norm(subtract(cov_hat, cov));

    const std::vector<double> ev = symmetric_eigenvalues(cov);
    const std::vector<double> ev_hat = symmetric_eigenvalues(cov_hat);
    gaps[flat] = ev[cfg.k - 1] - ev[cfg.k];
    mixed_gaps[flat] = ev[cfg.k - 1] - ev_hat[cfg.k];
    double trace = 0.0;
    for (double v : ev) trace += v;
    ranks[flat] = trace / std::max(std::abs(ev.front()), std::abs(ev.back()));
  });

  std::vector<double> log_s, log_err;
  for (std::size_t s_idx = 0; s_idx < cfg.s_grid.size(); ++s_idx) {
    std::vector<double> errs(errors.begin() + s_idx * cfg.trials,
                             errors.begin() + (s_idx + 1) * cfg.trials);
    ConcentrationPoint point;
    point.s = cfg.s_grid[s_idx];
    point.median_error = detail::median_of(errs);
    double mean = 0.0;
    for (double e : errs) mean += e;
    point.mean_error = mean / errs.size();
    report.points.push_back(point);
    log_s.push_back(std::log10(static_cast<double>(point.s)));
    log_err.push_back(std::log10(point.median_error));
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double m = static_cast<double>(log_s.size());
  for (std::size_t i = 0; i < log_s.size(); ++i) {
    sx += log_s[i];
    sy += log_err[i];
    sxx += log_s[i] * log_s[i];
    sxy += log_s[i] * log_err[i];
  }
  report.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  report.median_eigengap = detail::median_of(gaps);
  report.min_eigengap = *std::min_element(gaps.begin(), gaps.end());
  report.median_mixed_eigengap = detail::median_of(mixed_gaps);
  report.min_mixed_eigengap = *std::min_element(mixed_gaps.begin(), mixed_gaps.end());
  report.gap_violations = static_cast<int>(
      std::count_if(mixed_gaps.begin(), mixed_gaps.end(), [](double g) { return g <= 0.0; }));
  report.median_effective_rank = detail::median_of(ranks);
  return report;
}

// The two worked examples used as executable documentation and as release
// gates: a weighted graph with self loops whose dominant eigenvector is
// already class-constant, and a small simple-looking graph whose only
// equitable partition is the trivial one into singletons.
inline Graph fixture_graph_a() {
  return Graph::from_edge_list(6, {{0, 4, 2.0},
                                   {4, 5, 4.0},
                                   {5, 1, 2.0},
                                   {1, 2, 4.0},
                                   {2, 3, 4.0},
                                   {0, 0, 4.0},
                                   {3, 3, 4.0},
                                   {4, 4, 3.0},
                                   {5, 5, 3.0}});
}

inline Graph fixture_graph_b() {
  return Graph::from_edge_list(
      4, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}, {1, 3, 1.0}, {2, 3, 1.0}, {2, 2, 2.0}, {3, 3, 2.0}});
}

struct FixtureReport {
  bool all_ok = true;
  std::vector<std::string> lines;
};

namespace detail {

inline void fixture_check(FixtureReport& report, const std::string& name, bool ok,
                          const std::string& note = "") {
  std::string line = name;
  line += ok ? ": ok" : ": FAIL";
  if (!note.empty()) line += " (" + note + ")";
  report.lines.push_back(line);
  if (!ok) report.all_ok = false;
}

}  // namespace detail

// Checks the frozen expectations on the two fixture graphs.
inline FixtureReport run_fixtures() {
  FixtureReport report;

  const Graph a = fixture_graph_a();
  {
    const std::vector<double> v = {1.0, 1.0, 1.0, 1.0, 2.0, 2.0};
    const std::vector<double> av = matvec(a.adjacency(), v);
    bool exact = true;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (av[i] != 8.0 * v[i]) exact = false;
    detail::fixture_check(report, "A: dominant eigenpair (8, [1 1 1 1 2 2]) holds exactly", exact);
  }
  {
    Partition expected = Partition::from_assignment({0, 0, 0, 0, 1, 1});
    bool ok = false;
    std::string why;
    try {
      ok = perron_partition(a) == expected;
    } catch (const std::exception& e) {
      why = e.what();
    }
    detail::fixture_check(report, "A: dominant eigenvector splits nodes into 2 classes", ok, why);
    detail::fixture_check(report,
                          "A: the 2-class split is coarser than every equitable partition",
                          !is_equitable(a, expected) && refines(wl_refine(a), expected));
  }
  {
    const Partition cep = wl_refine(a);
    detail::fixture_check(report, "A: refinement reaches 6 singleton classes",
                          cep.class_count() == 6);
    detail::fixture_check(report, "A: oracle recovery agrees with direct refinement",
                          blind_wl(exact_oracle(a)) == cep);
  }

  const Graph b = fixture_graph_b();
  detail::fixture_check(report, "B: adjacency matrix is singular",
                        integer_determinant(b.adjacency()) == 0);
  const Partition cep_b = brute_force_cep(b);
  detail::fixture_check(report, "B: the only equitable partition is into singletons",
                        cep_b.class_count() == 4 && all_equitable_partitions(b).size() == 1);
  {
    const EigenDecomposition eig = symmetric_eig(b.adjacency());
    std::size_t zi = 0;
    for (std::size_t i = 1; i < eig.eigenvalues.size(); ++i)
      if (std::abs(eig.eigenvalues[i]) < std::abs(eig.eigenvalues[zi])) zi = i;
    const Matrix hn = normalized_indicator(cep_b);
    double norm2 = 0.0;
    for (int c = 0; c < cep_b.class_count(); ++c) {
      double dot = 0.0;
      for (std::size_t i = 0; i < eig.eigenvectors.rows(); ++i)
        dot += eig.eigenvectors(i, zi) * hn(i, c);
      norm2 += dot * dot;
    }
    const bool ok = std::abs(eig.eigenvalues[zi]) <= 1e-9 && norm2 >= 1.0 - 1e-9;
    const std::vector<int> idx = structural_eigvec_indices(eig, cep_b);
    const bool listed = std::find(idx.begin(), idx.end(), static_cast<int>(zi)) != idx.end();
    detail::fixture_check(report,
                          "B: the zero eigenvector lies in the class span and is structural",
                          ok && listed);
  }
  return report;
}

}  // namespace blindep
