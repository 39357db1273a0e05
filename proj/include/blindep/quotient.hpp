#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "blindep/graph.hpp"
#include "blindep/matrix.hpp"
#include "blindep/partition.hpp"

namespace blindep {

// Per-node class weight sums: entry (i, c) is the total edge weight from
// node i into class c. Equals A * H without forming the indicator.
inline Matrix class_weight_sums(const Matrix& a, const Partition& p) {
  if (a.rows() != static_cast<std::size_t>(p.size()))
    throw std::invalid_argument("class_weight_sums: matrix/partition size mismatch");
  Matrix s(a.rows(), static_cast<std::size_t>(p.class_count()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i);
    double* si = s.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) si[p.class_of(static_cast<int>(j))] += ai[j];
  }
  return s;
}

inline Matrix class_weight_sums(const Graph& g, const Partition& p) {
  return class_weight_sums(g.adjacency(), p);
}

// Quotient matrix paired with the class sizes it was computed from; the
// sizes are needed to lift quotient-level vectors back to node level.
struct QuotientMatrix {
  Matrix values;                 // k x k, entry (i, j) = weight from one class-i node into class j
  std::vector<int> class_sizes;  // k entries
};

// Default tolerance for deciding equitability: exact for integer-weighted
// graphs, scaled to the weight magnitude otherwise.
inline double default_equitable_tol(const Graph& g) {
  bool integral = true;
  for (double v : g.adjacency().data())
    if (v != std::floor(v)) {
      integral = false;
      break;
    }
  if (integral) return 0.0;
  return 1e-9 * std::max(1.0, max_abs(g.adjacency()));
}

// A partition is equitable when every node of a class has the same total
// weight into each class. Deviations are measured against the class mean.
inline bool is_equitable(const Graph& g, const Partition& p, double tol) {
  const Matrix s = class_weight_sums(g, p);
  const int k = p.class_count();
  std::vector<double> mean(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < p.size(); ++i) {
    const int ci = p.class_of(i);
    for (int c = 0; c < k; ++c) mean[ci * k + c] += s(i, c);
  }
  for (int ci = 0; ci < k; ++ci)
    for (int c = 0; c < k; ++c) mean[ci * k + c] /= p.class_sizes()[ci];
  for (int i = 0; i < p.size(); ++i) {
    const int ci = p.class_of(i);
    for (int c = 0; c < k; ++c)
      if (std::abs(s(i, c) - mean[ci * k + c]) > tol) return false;
  }
  return true;
}

inline bool is_equitable(const Graph& g, const Partition& p) {
  return is_equitable(g, p, default_equitable_tol(g));
}

// Quotient of the graph by a partition. Row i holds the class weight sums
// shared by the nodes of class i; for a non-equitable partition this is the
// class mean, so callers that care should check is_equitable first.
inline QuotientMatrix quotient(const Graph& g, const Partition& p) {
  const Matrix s = class_weight_sums(g, p);
  const int k = p.class_count();
  QuotientMatrix q;
  q.values = Matrix(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
  q.class_sizes = p.class_sizes();
  for (int i = 0; i < p.size(); ++i) {
    const int ci = p.class_of(i);
    for (int c = 0; c < k; ++c) q.values(ci, c) += s(i, c);
  }
  for (int ci = 0; ci < k; ++ci)
    for (int c = 0; c < k; ++c) q.values(ci, c) /= q.class_sizes[ci];
  return q;
}

}  // namespace blindep
