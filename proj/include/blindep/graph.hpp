#pragma once

#include <cmath>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "blindep/matrix.hpp"

namespace blindep {

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 1.0;
};

// Undirected weighted graph stored as a dense adjacency matrix. Self loops
// are allowed (weight on the diagonal). Instances are immutable after
// construction, which keeps them safe to share across worker threads.
class Graph {
 public:
  Graph() = default;

  static Graph from_edge_list(int n, const std::vector<Edge>& edges) {
    if (n <= 0) throw std::invalid_argument("Graph: node count must be positive");
    Matrix adj(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    std::set<std::pair<int, int>> seen;
    for (const Edge& e : edges) {
      if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
        throw std::invalid_argument("Graph: edge endpoint " + std::to_string(e.u) + "-" +
                                    std::to_string(e.v) + " out of range");
      if (e.weight <= 0.0 || !std::isfinite(e.weight))
        throw std::invalid_argument("Graph: edge weight must be positive and finite");
      auto key = std::minmax(e.u, e.v);
      if (!seen.insert(key).second)
        throw std::invalid_argument("Graph: duplicate edge " + std::to_string(e.u) + "-" +
                                    std::to_string(e.v));
      adj(e.u, e.v) = e.weight;
      adj(e.v, e.u) = e.weight;
    }
    return Graph(std::move(adj));
  }

  static Graph from_adjacency(Matrix adj) {
    if (adj.rows() == 0) throw std::invalid_argument("Graph: node count must be positive");
    if (adj.rows() != adj.cols()) throw std::invalid_argument("Graph: adjacency not square");
    for (std::size_t i = 0; i < adj.rows(); ++i)
      for (std::size_t j = i; j < adj.cols(); ++j) {
        if (adj(i, j) != adj(j, i))
          throw std::invalid_argument("Graph: adjacency not symmetric");
        if (adj(i, j) < 0.0 || !std::isfinite(adj(i, j)))
          throw std::invalid_argument("Graph: adjacency entries must be nonnegative and finite");
      }
    return Graph(std::move(adj));
  }

  int node_count() const { return static_cast<int>(adj_.rows()); }

  const Matrix& adjacency() const { return adj_; }

  double weight(int u, int v) const { return adj_(u, v); }

  // Simple means no self loops and only 0/1 weights.
  bool is_simple() const {
    for (std::size_t i = 0; i < adj_.rows(); ++i) {
      if (adj_(i, i) != 0.0) return false;
      for (std::size_t j = i + 1; j < adj_.cols(); ++j)
        if (adj_(i, j) != 0.0 && adj_(i, j) != 1.0) return false;
    }
    return true;
  }

  std::vector<Edge> edge_list() const {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < adj_.rows(); ++i)
      for (std::size_t j = i; j < adj_.cols(); ++j)
        if (adj_(i, j) != 0.0) edges.push_back({static_cast<int>(i), static_cast<int>(j), adj_(i, j)});
    return edges;
  }

 private:
  explicit Graph(Matrix adj) : adj_(std::move(adj)) {}

  Matrix adj_;
};

}  // namespace blindep
