#pragma once

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "blindep/config_model.hpp"
#include "blindep/eig.hpp"
#include "blindep/experiment.hpp"
#include "blindep/graph.hpp"
#include "blindep/matrix.hpp"
#include "blindep/partition.hpp"
#include "blindep/signal.hpp"

namespace blindep {

// Shortest decimal form that round-trips the exact double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Fixed 17 significant digits, enough to reconstruct any double exactly.
inline std::string format_double_17(double v) {
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw std::invalid_argument("parse_double: bad number '" + text + "'");
  return v;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

// ---- graphs --------------------------------------------------------------

inline nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json j;
  j["n"] = g.node_count();
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const Edge& e : g.edge_list()) edges.push_back({e.u, e.v, e.weight});
  return j;
}

inline Graph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw std::invalid_argument("graph json must be an object with 'n' and 'edges'");
  const int n = j.at("n").get<int>();
  std::vector<Edge> edges;
  for (const auto& item : j.at("edges")) {
    if (!item.is_array() || (item.size() != 2 && item.size() != 3))
      throw std::invalid_argument("graph json: each edge must be [u, v] or [u, v, w]");
    Edge e;
    e.u = item.at(0).get<int>();
    e.v = item.at(1).get<int>();
    e.weight = item.size() == 3 ? item.at(2).get<double>() : 1.0;
    edges.push_back(e);
  }
  return Graph::from_edge_list(n, edges);
}

// Plain text alternative: a "n=<count>" header line, then "u v w" per edge.
inline std::string graph_to_text(const Graph& g) {
  std::string out = "n=" + std::to_string(g.node_count()) + "\n";
  for (const Edge& e : g.edge_list())
    out += std::to_string(e.u) + " " + std::to_string(e.v) + " " + format_double(e.weight) + "\n";
  return out;
}

inline Graph graph_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int n = -1;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (n < 0) {
      if (line.rfind("n=", 0) != 0)
        throw std::invalid_argument("graph text: first line must be 'n=<count>'");
      n = std::stoi(line.substr(2));
      continue;
    }
    std::istringstream row(line);
    Edge e;
    if (!(row >> e.u >> e.v >> e.weight))
      throw std::invalid_argument("graph text: bad edge line '" + line + "'");
    edges.push_back(e);
  }
  if (n < 0) throw std::invalid_argument("graph text: missing header");
  return Graph::from_edge_list(n, edges);
}

// ---- partitions and degree plans ------------------------------------------

inline nlohmann::json partition_to_json(const Partition& p) {
  return nlohmann::json(p.assignment());
}

inline Partition partition_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("partition json must be an array of class ids");
  return Partition::from_assignment(j.get<std::vector<int>>());
}

inline nlohmann::json planted_spec_to_json(const PlantedSpec& spec) {
  nlohmann::json j;
  j["sizes"] = spec.class_sizes;
  j["D"] = spec.quotient_degrees;
  return j;
}

inline PlantedSpec planted_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("sizes") || !j.contains("D"))
    throw std::invalid_argument("degree plan json must be an object with 'sizes' and 'D'");
  PlantedSpec spec;
  spec.class_sizes = j.at("sizes").get<std::vector<int>>();
  spec.quotient_degrees = j.at("D").get<std::vector<std::vector<int>>>();
  spec.validate();
  return spec;
}

// ---- sample sets -----------------------------------------------------------

// Binary layout, all little endian: magic "BLEPSMP1", then n, s, seed as
// u64, alpha as f64, filter degree as u64, the filter coefficients as f64,
// then the n x s sample block as f64 in column-major order (one sample's
// entries are contiguous).
inline constexpr char kSampleMagic[8] = {'B', 'L', 'E', 'P', 'S', 'M', 'P', '1'};

static_assert(std::endian::native == std::endian::little,
              "sample set serialization assumes a little endian host");

namespace detail {

inline void put_u64(std::string& out, std::uint64_t v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.append(buf, 8);
}

inline void put_f64(std::string& out, double v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.append(buf, 8);
}

class ByteReader {
 public:
  ByteReader(const std::string& data) : data_(data) {}

  std::uint64_t u64() {
    check(8);
    std::uint64_t v;
    std::memcpy(&v, data_.data() + pos_, 8);
    pos_ += 8;
    return v;
  }

  double f64() {
    check(8);
    double v;
    std::memcpy(&v, data_.data() + pos_, 8);
    pos_ += 8;
    return v;
  }

  void raw(char* dst, std::size_t count) {
    check(count);
    std::memcpy(dst, data_.data() + pos_, count);
    pos_ += count;
  }

  bool exhausted() const { return pos_ == data_.size(); }

 private:
  void check(std::size_t count) const {
    if (pos_ + count > data_.size())
      throw std::invalid_argument("sample set file is truncated");
  }

  const std::string& data_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string sample_set_to_bytes(const SampleSet& set) {
  std::string out(kSampleMagic, 8);
  const std::uint64_t n = set.samples.rows();
  const std::uint64_t s = set.samples.cols();
  detail::put_u64(out, n);
  detail::put_u64(out, s);
  detail::put_u64(out, set.seed);
  detail::put_f64(out, set.alpha);
  detail::put_u64(out, set.filter_coefficients.size() - 1);
  for (double c : set.filter_coefficients) detail::put_f64(out, c);
  for (std::uint64_t j = 0; j < s; ++j)
    for (std::uint64_t i = 0; i < n; ++i) detail::put_f64(out, set.samples(i, j));
  return out;
}

inline SampleSet sample_set_from_bytes(const std::string& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kSampleMagic, 8) != 0)
    throw std::invalid_argument("sample set file: bad magic");
  detail::ByteReader in(bytes);
  char magic[8];
  in.raw(magic, 8);
  SampleSet set;
  const std::uint64_t n = in.u64();
  const std::uint64_t s = in.u64();
  if (n == 0 || s == 0 || n > (1u << 24) || s > (1u << 24))
    throw std::invalid_argument("sample set file: implausible dimensions");
  set.seed = in.u64();
  set.alpha = in.f64();
  const std::uint64_t degree = in.u64();
  if (degree > 64) throw std::invalid_argument("sample set file: implausible filter degree");
  set.filter_coefficients.resize(degree + 1);
  for (double& c : set.filter_coefficients) c = in.f64();
  set.samples = Matrix(n, s);
  for (std::uint64_t j = 0; j < s; ++j)
    for (std::uint64_t i = 0; i < n; ++i) set.samples(i, j) = in.f64();
  if (!in.exhausted()) throw std::invalid_argument("sample set file: trailing bytes");
  return set;
}

// CSV alternative: one sample per line, node values comma separated.
inline std::string sample_set_to_csv(const SampleSet& set) {
  std::string out;
  for (std::size_t j = 0; j < set.samples.cols(); ++j) {
    for (std::size_t i = 0; i < set.samples.rows(); ++i) {
      if (i) out += ',';
      out += format_double(set.samples(i, j));
    }
    out += '\n';
  }
  return out;
}

// ---- eigendecompositions ---------------------------------------------------

// Hand-rendered so every value carries 17 significant digits.
inline std::string eigendecomposition_to_json(const EigenDecomposition& eig) {
  std::string out = "{\n  \"eigenvalues\": [";
  for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i) {
    if (i) out += ", ";
    out += format_double_17(eig.eigenvalues[i]);
  }
  out += "],\n  \"eigenvectors\": [\n";
  for (std::size_t i = 0; i < eig.eigenvectors.rows(); ++i) {
    out += "    [";
    for (std::size_t j = 0; j < eig.eigenvectors.cols(); ++j) {
      if (j) out += ", ";
      out += format_double_17(eig.eigenvectors(i, j));
    }
    out += i + 1 < eig.eigenvectors.rows() ? "],\n" : "]\n";
  }
  out += "  ]\n}\n";
  return out;
}

inline EigenDecomposition eigendecomposition_from_json(const nlohmann::json& j) {
  EigenDecomposition eig;
  eig.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
  const auto rows = j.at("eigenvectors").get<std::vector<std::vector<double>>>();
  if (!rows.empty()) {
    eig.eigenvectors = Matrix(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != eig.eigenvectors.cols())
        throw std::invalid_argument("eigendecomposition json: ragged eigenvector rows");
      for (std::size_t c = 0; c < rows[i].size(); ++c) eig.eigenvectors(i, c) = rows[i][c];
    }
  }
  return eig;
}

// ---- experiment configs ----------------------------------------------------

inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("experiment config must be a json object");
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "n") cfg.n = value.get<int>();
    else if (key == "k") cfg.k = value.get<int>();
    else if (key == "alpha_grid") cfg.alpha_grid = value.get<std::vector<double>>();
    else if (key == "s_grid") cfg.s_grid = value.get<std::vector<int>>();
    else if (key == "trials") cfg.trials = value.get<int>();
    else if (key == "master_seed") cfg.master_seed = value.get<std::uint64_t>();
    else if (key == "filter") cfg.filter.coefficients = value.get<std::vector<double>>();
    else if (key == "algorithms") cfg.algorithms = value.get<std::vector<std::string>>();
    else if (key == "kmeans_restarts") cfg.kmeans_restarts = value.get<int>();
    else if (key == "max_quotient_degree") cfg.max_quotient_degree = value.get<int>();
    else if (key == "threads") cfg.threads = value.get<unsigned>();
    else if (key == "max_planted_redraws") cfg.max_planted_redraws = value.get<int>();
    else if (key == "gen") {
      for (const auto& [gk, gv] : value.items()) {
        if (gk == "max_retries") cfg.gen.max_retries = gv.get<int>();
        else if (gk == "global_restarts") cfg.gen.global_restarts = gv.get<int>();
        else throw std::invalid_argument("experiment config: unknown gen key '" + gk + "'");
      }
    } else if (key == "robust") {
      for (const auto& [rk, rv] : value.items()) {
        if (rk == "max_components") cfg.robust.max_components = rv.get<int>();
        else if (rk == "covariance_regularizer") cfg.robust.covariance_regularizer = rv.get<double>();
        else if (rk == "em_restarts") cfg.robust.em_restarts = rv.get<int>();
        else if (rk == "component_selection") {
          const std::string mode = rv.get<std::string>();
          if (mode == "fixed") cfg.robust.component_selection = ComponentSelection::kFixed;
          else if (mode == "bic") cfg.robust.component_selection = ComponentSelection::kBic;
          else throw std::invalid_argument("experiment config: component_selection must be 'fixed' or 'bic'");
        } else {
          throw std::invalid_argument("experiment config: unknown robust key '" + rk + "'");
        }
      }
    } else {
      throw std::invalid_argument("experiment config: unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

// ---- metric rows and reports ------------------------------------------------

inline constexpr const char* kMetricsCsvHeader =
    "trial,seed,alpha,s,algorithm,accuracy,node_cost,runtime_ms,flags";

inline std::string metrics_to_csv(const std::vector<MetricRow>& rows) {
  std::string out = kMetricsCsvHeader;
  out += '\n';
  for (const MetricRow& r : rows) {
    out += std::to_string(r.trial);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += format_double(r.alpha);
    out += ',';
    out += std::to_string(r.s);
    out += ',';
    out += r.algorithm;
    out += ',';
    out += std::to_string(r.accuracy);
    out += ',';
    out += format_double(r.node_cost);
    out += ',';
    out += format_double(r.runtime_ms);
    out += ',';
    out += r.flags;
    out += '\n';
  }
  return out;
}

inline nlohmann::json metrics_to_json(const std::vector<MetricRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const MetricRow& r : rows) {
    nlohmann::json j;
    j["trial"] = r.trial;
    j["seed"] = r.seed;
    j["alpha"] = r.alpha;
    j["s"] = r.s;
    j["algorithm"] = r.algorithm;
    j["accuracy"] = r.accuracy;
    j["node_cost"] = r.node_cost;
    j["runtime_ms"] = r.runtime_ms;
    j["flags"] = r.flags;
    arr.push_back(std::move(j));
  }
  return arr;
}

inline nlohmann::json concentration_report_to_json(const ConcentrationReport& report) {
  nlohmann::json j;
  j["alpha"] = report.alpha;
  j["trials"] = report.trials;
  j["slope"] = report.slope;
  j["median_eigengap"] = report.median_eigengap;
  j["min_eigengap"] = report.min_eigengap;
  j["median_mixed_eigengap"] = report.median_mixed_eigengap;
  j["min_mixed_eigengap"] = report.min_mixed_eigengap;
  j["gap_violations"] = report.gap_violations;
  j["median_effective_rank"] = report.median_effective_rank;
  auto& points = j["points"] = nlohmann::json::array();
  for (const ConcentrationPoint& p : report.points) {
    nlohmann::json pj;
    pj["s"] = p.s;
    pj["median_error"] = p.median_error;
    pj["mean_error"] = p.mean_error;
    points.push_back(std::move(pj));
  }
  return j;
}

}  // namespace blindep
