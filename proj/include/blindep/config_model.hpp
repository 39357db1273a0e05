#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "blindep/graph.hpp"
#include "blindep/matrix.hpp"
#include "blindep/partition.hpp"
#include "blindep/quotient.hpp"
#include "blindep/seeds.hpp"

namespace blindep {

// Degree plan for a graph with a planted equitable partition: class i nodes
// carry exactly quotient_degrees[i][j] edges into class j.
struct PlantedSpec {
  std::vector<int> class_sizes;
  std::vector<std::vector<int>> quotient_degrees;

  int class_count() const { return static_cast<int>(class_sizes.size()); }

  int total_nodes() const {
    int n = 0;
    for (int s : class_sizes) n += s;
    return n;
  }

  void validate() const {
    const int k = class_count();
    if (k == 0) throw std::invalid_argument("PlantedSpec: no classes");
    if (static_cast<int>(quotient_degrees.size()) != k)
      throw std::invalid_argument("PlantedSpec: degree matrix row count mismatch");
    for (const auto& row : quotient_degrees)
      if (static_cast<int>(row.size()) != k)
        throw std::invalid_argument("PlantedSpec: degree matrix is not square");
    for (int s : class_sizes)
      if (s <= 0) throw std::invalid_argument("PlantedSpec: class sizes must be positive");
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        const int d = quotient_degrees[i][j];
        if (d < 0) throw std::invalid_argument("PlantedSpec: negative degree");
        if (i == j) {
          if (d > class_sizes[i] - 1)
            throw std::invalid_argument("PlantedSpec: within-class degree exceeds class size - 1");
          if ((static_cast<long long>(class_sizes[i]) * d) % 2 != 0)
            throw std::invalid_argument("PlantedSpec: odd within-class stub total");
        } else {
          if (d > class_sizes[j])
            throw std::invalid_argument("PlantedSpec: cross-class degree exceeds target class size");
          if (static_cast<long long>(class_sizes[i]) * d !=
              static_cast<long long>(class_sizes[j]) * quotient_degrees[j][i])
            throw std::invalid_argument("PlantedSpec: cross-class stub totals disagree");
        }
      }
  }
};

struct GenConfig {
  int max_retries = 100;     // per-block rewiring attempts before redrawing the block
  int global_restarts = 50;  // whole-graph restarts before giving up
};

struct PlantedGraph {
  Graph graph;
  Partition partition;
  int block_redraws = 0;   // blocks that needed a fresh stub shuffle
  int graph_restarts = 0;  // times the whole wiring was restarted
};

namespace detail {

using EdgeKey = std::pair<int, int>;

inline EdgeKey edge_key(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

// Wires one block of the planted graph: a d-regular simple graph inside a
// class (lo == lo2) or a biregular bipartite graph across two classes. Stub
// matching draws a random perfect matching of the stubs; collisions are then
// repaired by degree-preserving pair swaps. Returns false if the repair loop
// gives up, in which case the caller reshuffles.
inline bool wire_block(std::map<EdgeKey, int>& edges, int lo, int size, int lo2, int size2,
                       int degree, std::mt19937_64& rng) {
  if (degree == 0) return true;
  std::vector<std::pair<int, int>> pairs;
  if (lo == lo2) {
    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(size) * degree);
    for (int v = 0; v < size; ++v)
      for (int t = 0; t < degree; ++t) stubs.push_back(lo + v);
    std::shuffle(stubs.begin(), stubs.end(), rng);
    for (std::size_t t = 0; t + 1 < stubs.size(); t += 2) pairs.emplace_back(stubs[t], stubs[t + 1]);
  } else {
    const int per = degree * size / size2;  // consistency makes this exact
    std::vector<int> right;
    right.reserve(static_cast<std::size_t>(size) * degree);
    for (int v = 0; v < size2; ++v)
      for (int t = 0; t < per; ++t) right.push_back(lo2 + v);
    std::shuffle(right.begin(), right.end(), rng);
    std::size_t t = 0;
    for (int v = 0; v < size; ++v)
      for (int d = 0; d < degree; ++d) pairs.emplace_back(lo + v, right[t++]);
  }

  std::map<EdgeKey, int> block;
  for (const auto& [u, v] : pairs) ++block[edge_key(u, v)];
  auto bad = [&](int u, int v) { return u == v || block[edge_key(u, v)] > 1; };

  std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
  const int budget = 200 + 20 * static_cast<int>(pairs.size());
  for (int attempt = 0; attempt < budget; ++attempt) {
    std::size_t first = pairs.size();
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (bad(pairs[i].first, pairs[i].second)) {
        first = i;
        break;
      }
    if (first == pairs.size()) break;
    const std::size_t other = pick(rng);
    if (other == first) continue;
    auto [u1, v1] = pairs[first];
    auto [u2, v2] = pairs[other];
    // Swap the second endpoints and keep every per-node degree unchanged.
    if (u1 == v2 || u2 == v1) continue;
    auto k1 = edge_key(u1, v1), k2 = edge_key(u2, v2);
    auto n1 = edge_key(u1, v2), n2 = edge_key(u2, v1);
    --block[k1];
    --block[k2];
    if (block[n1] > 0 || block[n2] > 0 || n1 == n2) {
      ++block[k1];
      ++block[k2];
      continue;
    }
    ++block[n1];
    ++block[n2];
    pairs[first] = {u1, v2};
    pairs[other] = {u2, v1};
  }
  for (const auto& [u, v] : pairs)
    if (bad(u, v)) return false;
  for (const auto& [key, count] : block)
    if (count > 0) edges[key] += count;
  return true;
}

}  // namespace detail

// Samples a simple graph realizing the degree plan exactly. Node ids are
// grouped by class in order, so the returned partition is contiguous.
inline PlantedGraph sample_graph(const PlantedSpec& spec, const GenConfig& config,
                                 std::uint64_t seed) {
  spec.validate();
  const int k = spec.class_count();
  std::vector<int> offset(k + 1, 0);
  for (int i = 0; i < k; ++i) offset[i + 1] = offset[i] + spec.class_sizes[i];
  std::vector<int> labels(offset[k]);
  for (int i = 0; i < k; ++i)
    for (int v = offset[i]; v < offset[i + 1]; ++v) labels[v] = i;

  PlantedGraph out;
  out.partition = Partition::from_assignment(labels);
  for (int restart = 0; restart <= config.global_restarts; ++restart) {
    std::map<detail::EdgeKey, int> edges;
    bool ok = true;
    int block_index = 0;
    for (int i = 0; i < k && ok; ++i)
      for (int j = i; j < k && ok; ++j, ++block_index) {
        bool wired = false;
        for (int redraw = 0; redraw <= config.max_retries; ++redraw) {
          auto rng = detail::make_engine(
              seed, {detail::kStreamWiring, static_cast<std::uint64_t>(restart),
                     static_cast<std::uint64_t>(block_index), static_cast<std::uint64_t>(redraw)});
          if (detail::wire_block(edges, offset[i], spec.class_sizes[i], offset[j],
                                 spec.class_sizes[j], spec.quotient_degrees[i][j], rng)) {
            wired = true;
            break;
          }
          ++out.block_redraws;
        }
        ok = wired;
      }
    if (!ok) {
      ++out.graph_restarts;
      continue;
    }

    std::vector<Edge> edge_list;
    edge_list.reserve(edges.size());
    for (const auto& [key, count] : edges)
      if (count > 0) edge_list.push_back({key.first, key.second, 1.0});
    out.graph = Graph::from_edge_list(out.partition.size(), edge_list);

    // The wiring must realize the plan exactly; anything else is a bug.
    const Matrix sums = class_weight_sums(out.graph, out.partition);
    for (int v = 0; v < out.partition.size(); ++v)
      for (int c = 0; c < k; ++c)
        if (sums(v, c) != static_cast<double>(spec.quotient_degrees[out.partition.class_of(v)][c]))
          throw std::logic_error("sample_graph: wiring does not match the degree plan");
    return out;
  }
  throw std::runtime_error("sample_graph: failed to realize the plan after " +
                           std::to_string(config.global_restarts) + " restarts");
}

// Draws a symmetric-consistent degree plan with entries uniform in
// {0, ..., max_degree}. Plans with two identical rows are rejected, since
// those force the planted classes to blur together under refinement.
inline std::vector<std::vector<int>> sample_quotient_degrees(const std::vector<int>& class_sizes,
                                                             int max_degree, std::uint64_t seed) {
  const int k = static_cast<int>(class_sizes.size());
  if (k == 0) throw std::invalid_argument("sample_quotient_degrees: no classes");
  if (max_degree < 0) throw std::invalid_argument("sample_quotient_degrees: negative max degree");
  auto rng = detail::make_engine(seed, {detail::kStreamDegrees});
  std::uniform_int_distribution<int> uniform(0, max_degree);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<std::vector<int>> d(k, std::vector<int>(k, 0));
    bool feasible = true;
    for (int i = 0; i < k && feasible; ++i) {
      for (int j = i; j < k; ++j) {
        bool ok = false;
        for (int tries = 0; tries < 1000; ++tries) {
          const int v = uniform(rng);
          if (i == j) {
            if (v <= class_sizes[i] - 1 &&
                (static_cast<long long>(class_sizes[i]) * v) % 2 == 0) {
              d[i][i] = v;
              ok = true;
              break;
            }
          } else {
            const long long stubs = static_cast<long long>(class_sizes[i]) * v;
            if (v <= class_sizes[j] && stubs % class_sizes[j] == 0 &&
                stubs / class_sizes[j] <= std::min(max_degree, class_sizes[i])) {
              d[i][j] = v;
              d[j][i] = static_cast<int>(stubs / class_sizes[j]);
              ok = true;
              break;
            }
          }
        }
        feasible = ok;
        if (!ok) break;
      }
    }
    if (!feasible) continue;
    bool distinct = true;
    for (int i = 0; i < k && distinct; ++i)
      for (int j = i + 1; j < k; ++j)
        if (d[i] == d[j]) {
          distinct = false;
          break;
        }
    if (distinct) return d;
  }
  throw std::runtime_error("sample_quotient_degrees: rejection sampling did not terminate");
}

}  // namespace blindep
