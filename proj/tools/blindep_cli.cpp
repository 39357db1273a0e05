// Command line front end. Subcommands mirror the workflow: generate a planted
// model, draw signals from it, recover the partition from those signals, or
// run the full sweep and diagnostics from a config file.
//
// Exit codes: 0 on success, 1 for I/O and configuration errors, 2 when the
// built-in fixture checks disagree with the library.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blindep/blindep.hpp"
#include "blindep/io.hpp"

using namespace blindep;

namespace {

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty())
    std::cout << content;
  else
    write_text_file(out_path, content);
}

// Graph files are JSON objects or the line based text format; the first
// non-space byte tells them apart.
Graph load_graph(const std::string& path) {
  const std::string text = read_text_file(path);
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    if (c == '{') return graph_from_json(nlohmann::json::parse(text));
    break;
  }
  return graph_from_text(text);
}

Partition load_partition(const std::string& path) {
  return partition_from_json(nlohmann::json::parse(read_text_file(path)));
}

FilterSpec parse_filter(const std::vector<double>& coefficients) {
  FilterSpec filter = identity_filter();
  if (!coefficients.empty()) filter.coefficients = coefficients;
  filter.validate();
  return filter;
}

// Square numeric CSV, one matrix row per line.
Matrix matrix_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t from = 0;
    for (;;) {
      const std::size_t comma = line.find(',', from);
      row.push_back(parse_double(
          line.substr(from, (comma == std::string::npos ? line.size() : comma) - from)));
      if (comma == std::string::npos) break;
      from = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("covariance csv: no rows");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols())
      throw std::invalid_argument("covariance csv: ragged rows");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  if (m.rows() != m.cols()) throw std::invalid_argument("covariance csv: matrix must be square");
  return m;
}

int cmd_generate(const std::string& spec_path, int n, int k, int max_degree, std::uint64_t seed,
                 const std::string& graph_format, const std::string& graph_out,
                 const std::string& partition_out, const std::string& spec_out,
                 const std::string& out) {
  PlantedSpec spec;
  if (!spec_path.empty()) {
    spec = planted_spec_from_json(nlohmann::json::parse(read_text_file(spec_path)));
  } else {
    if (n <= 0 || k <= 0 || n % k != 0)
      throw std::invalid_argument("generate: need --spec, or --n divisible by --k");
    const std::vector<int> sizes(static_cast<std::size_t>(k), n / k);
    spec.class_sizes = sizes;
    spec.quotient_degrees = sample_quotient_degrees(sizes, max_degree, seed);
  }

  const PlantedGraph pg = sample_graph(spec, GenConfig{}, seed);

  if (!graph_out.empty())
    emit(graph_format == "text" ? graph_to_text(pg.graph) : graph_to_json(pg.graph).dump(2) + "\n",
         graph_out);
  if (!partition_out.empty()) emit(partition_to_json(pg.partition).dump() + "\n", partition_out);
  if (!spec_out.empty()) emit(planted_spec_to_json(spec).dump(2) + "\n", spec_out);

  if (graph_out.empty() && partition_out.empty() && spec_out.empty()) {
    nlohmann::json bundle;
    bundle["spec"] = planted_spec_to_json(spec);
    bundle["graph"] = graph_to_json(pg.graph);
    bundle["partition"] = partition_to_json(pg.partition);
    bundle["block_redraws"] = pg.block_redraws;
    emit(bundle.dump(2) + "\n", out);
  }
  return 0;
}

int cmd_sample(const std::string& graph_path, const std::string& partition_path, double alpha,
               const std::vector<double>& coefficients, int s, std::uint64_t seed,
               const std::string& format, const std::string& out) {
  const SignalModel model{load_graph(graph_path), load_partition(partition_path), alpha,
                          parse_filter(coefficients)};
  const SampleSet set = generate_samples(model, s, seed);
  if (format == "csv") {
    emit(sample_set_to_csv(set), out);
  } else {
    if (out.empty()) throw std::invalid_argument("sample: binary output requires --out");
    write_text_file(out, sample_set_to_bytes(set));
  }
  return 0;
}

int cmd_extract(const std::string& samples_path, const std::string& covariance_path,
                const std::string& algorithm, int k, int max_components,
                const std::string& selection, int restarts, std::uint64_t seed,
                const std::string& reference_path, const std::string& out) {
  if (samples_path.empty() == covariance_path.empty())
    throw std::invalid_argument("extract: give exactly one of --samples and --covariance");
  const Matrix cov =
      samples_path.empty()
          ? matrix_from_csv(read_text_file(covariance_path))
          : sample_covariance(sample_set_from_bytes(read_text_file(samples_path)));

  Partition found = Partition::singletons(static_cast<int>(cov.rows()));
  nlohmann::json report;
  if (algorithm == "spectral") {
    if (k <= 0) throw std::invalid_argument("extract: spectral needs --k");
    found = spectral_extract(cov, k, restarts, seed);
  } else {
    RobustConfig config;
    config.max_components = max_components;
    config.em_restarts = restarts;
    config.component_selection =
        selection == "fixed" ? ComponentSelection::kFixed : ComponentSelection::kBic;
    const RobustResult result = robust_blind_wl(matrix_oracle(cov), config, seed);
    found = result.partition;
    report["rounds"] = result.rounds;
    report["converged"] = result.converged;
  }

  report["algorithm"] = algorithm;
  report["classes"] = found.class_count();
  report["partition"] = partition_to_json(found);
  if (!reference_path.empty())
    report["accuracy"] = graph_accuracy(found, load_partition(reference_path));
  emit(report.dump(2) + "\n", out);
  return 0;
}

ExperimentConfig load_config(const std::string& config_path, std::int64_t seed_override,
                             int threads_override) {
  ExperimentConfig cfg;
  if (!config_path.empty())
    cfg = experiment_config_from_json(nlohmann::json::parse(read_text_file(config_path)));
  if (seed_override >= 0) cfg.master_seed = static_cast<std::uint64_t>(seed_override);
  if (threads_override >= 0) cfg.threads = static_cast<unsigned>(threads_override);
  cfg.validate();
  return cfg;
}

int cmd_sweep(const std::string& config_path, std::int64_t seed_override, int threads_override,
              const std::string& format, const std::string& out) {
  const ExperimentConfig cfg = load_config(config_path, seed_override, threads_override);
  const std::vector<MetricRow> rows = run_sweep(cfg);
  emit(format == "json" ? metrics_to_json(rows).dump(2) + "\n" : metrics_to_csv(rows), out);
  return 0;
}

int cmd_diagnose(const std::string& config_path, std::int64_t seed_override, int threads_override,
                 const std::string& out) {
  const ExperimentConfig cfg = load_config(config_path, seed_override, threads_override);
  const ConcentrationReport report = concentration_diagnostic(cfg);
  emit(concentration_report_to_json(report).dump(2) + "\n", out);
  return 0;
}

int cmd_fixtures() {
  const FixtureReport report = run_fixtures();
  for (const std::string& line : report.lines) std::cout << line << "\n";
  return report.all_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equitable partition recovery from graph signals"};
  app.require_subcommand(1);

  // generate
  std::string gen_spec, gen_graph_format = "json", gen_graph_out, gen_partition_out, gen_spec_out;
  std::string gen_out;
  int gen_n = 0, gen_k = 0, gen_max_degree = 4;
  std::uint64_t gen_seed = 1;
  CLI::App* generate = app.add_subcommand("generate", "Draw a graph with a planted partition");
  generate->add_option("--spec", gen_spec, "Planted spec JSON (sizes and quotient degrees)");
  generate->add_option("--n", gen_n, "Node count (used with --k when no spec is given)");
  generate->add_option("--k", gen_k, "Class count (classes get equal sizes)");
  generate->add_option("--max-degree", gen_max_degree, "Quotient degree cap for drawn specs");
  generate->add_option("--seed", gen_seed, "Seed for spec and wiring draws");
  generate->add_option("--format", gen_graph_format, "Graph file format: json or text")
      ->check(CLI::IsMember({"json", "text"}));
  generate->add_option("--graph-out", gen_graph_out, "Write the graph here");
  generate->add_option("--partition-out", gen_partition_out, "Write the planted partition here");
  generate->add_option("--spec-out", gen_spec_out, "Write the spec here");
  generate->add_option("--out", gen_out, "Write the combined JSON bundle here");

  // sample
  std::string smp_graph, smp_partition, smp_format = "bin", smp_out;
  std::vector<double> smp_filter;
  double smp_alpha = 1.0;
  int smp_s = 100;
  std::uint64_t smp_seed = 1;
  CLI::App* sample = app.add_subcommand("sample", "Draw graph signals from a planted model");
  sample->add_option("--graph", smp_graph, "Graph file (JSON or text)")->required();
  sample->add_option("--partition", smp_partition, "Planted partition JSON")->required();
  sample->add_option("--alpha", smp_alpha, "Signal strength in [0, 1]");
  sample->add_option("--filter", smp_filter,
                     "Polynomial filter coefficients c0 c1 ... (default: identity)");
  sample->add_option("--s", smp_s, "Number of observations");
  sample->add_option("--seed", smp_seed, "Sampling seed");
  sample->add_option("--format", smp_format, "Output format: bin or csv")
      ->check(CLI::IsMember({"bin", "csv"}));
  sample->add_option("--out", smp_out, "Output path (required for bin)");

  // extract
  std::string ext_samples, ext_covariance, ext_algorithm = "spectral", ext_selection = "bic";
  std::string ext_reference, ext_out;
  int ext_k = 0, ext_max_components = 6, ext_restarts = 10;
  std::uint64_t ext_seed = 0;
  CLI::App* extract = app.add_subcommand("extract", "Recover a partition from stored signals");
  extract->add_option("--samples", ext_samples, "Sample set file (bin)");
  extract->add_option("--covariance", ext_covariance, "Covariance matrix file (square csv)");
  extract->add_option("--algorithm", ext_algorithm, "spectral or robust")
      ->check(CLI::IsMember({"spectral", "robust"}));
  extract->add_option("--k", ext_k, "Class count for the spectral route");
  extract->add_option("--max-components", ext_max_components,
                      "Per-round component cap for the robust route");
  extract->add_option("--selection", ext_selection, "Robust component selection: bic or fixed")
      ->check(CLI::IsMember({"bic", "fixed"}));
  extract->add_option("--restarts", ext_restarts, "Clustering restarts");
  extract->add_option("--seed", ext_seed, "Clustering seed");
  extract->add_option("--reference", ext_reference, "Partition JSON to score accuracy against");
  extract->add_option("--out", ext_out, "Write the report here");

  // sweep / diagnose
  std::string swp_config, swp_format = "csv", swp_out;
  std::int64_t swp_seed = -1;
  int swp_threads = -1;
  CLI::App* sweep = app.add_subcommand("sweep", "Run the evaluation sweep from a config file");
  sweep->add_option("--config", swp_config, "Experiment config JSON")->required();
  sweep->add_option("--seed", swp_seed, "Override the master seed");
  sweep->add_option("--threads", swp_threads, "Override the thread count (0 = all)");
  sweep->add_option("--format", swp_format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", swp_out, "Write metrics here");

  std::string dia_config, dia_out;
  std::int64_t dia_seed = -1;
  int dia_threads = -1;
  CLI::App* diagnose =
      app.add_subcommand("diagnose", "Covariance concentration report for a config");
  diagnose->add_option("--config", dia_config, "Experiment config JSON")->required();
  diagnose->add_option("--seed", dia_seed, "Override the master seed");
  diagnose->add_option("--threads", dia_threads, "Override the thread count (0 = all)");
  diagnose->add_option("--out", dia_out, "Write the JSON report here");

  CLI::App* fixtures = app.add_subcommand("fixtures", "Check the built-in worked examples");
  (void)fixtures;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (generate->parsed())
      return cmd_generate(gen_spec, gen_n, gen_k, gen_max_degree, gen_seed, gen_graph_format,
                          gen_graph_out, gen_partition_out, gen_spec_out, gen_out);
    if (sample->parsed())
      return cmd_sample(smp_graph, smp_partition, smp_alpha, smp_filter, smp_s, smp_seed,
                        smp_format, smp_out);
    if (extract->parsed())
      return cmd_extract(ext_samples, ext_covariance, ext_algorithm, ext_k, ext_max_components,
                         ext_selection, ext_restarts, ext_seed, ext_reference, ext_out);
    if (sweep->parsed()) return cmd_sweep(swp_config, swp_seed, swp_threads, swp_format, swp_out);
    if (diagnose->parsed()) return cmd_diagnose(dia_config, dia_seed, dia_threads, dia_out);
    if (fixtures->parsed()) return cmd_fixtures();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
