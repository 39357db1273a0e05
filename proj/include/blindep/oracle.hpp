#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "blindep/graph.hpp"
#include "blindep/matrix.hpp"
#include "blindep/partition.hpp"
#include "blindep/refine.hpp"

namespace blindep {

// A matrix-vector oracle: some unknown linear map applied to a block of
// probe vectors. The partition recovery loop only ever talks to the graph
// through one of these.
struct Oracle {
  int dimension = 0;
  std::function<Matrix(const Matrix&)> apply;
};

inline Oracle matrix_oracle(Matrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix_oracle: matrix not square");
  const int n = static_cast<int>(m.rows());
  return Oracle{n, [m = std::move(m)](const Matrix& b) { return multiply(m, b); }};
}

inline Oracle exact_oracle(const Graph& g) { return matrix_oracle(g.adjacency()); }

namespace detail {

inline void check_indicator(const Matrix& b) {
  for (std::size_t i = 0; i < b.rows(); ++i) {
    int ones = 0;
    for (std::size_t j = 0; j < b.cols(); ++j) {
      const double v = b(i, j);
      if (v != 0.0 && v != 1.0)
        throw std::invalid_argument("indicator matrix entries must be 0 or 1");
      if (v == 1.0) ++ones;
    }
    if (ones != 1)
      throw std::invalid_argument("indicator matrix rows must contain exactly one 1");
  }
}

}  // namespace detail

inline Partition partition_from_indicator(const Matrix& b) {
  detail::check_indicator(b);
  std::vector<int> labels(b.rows(), -1);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      if (b(i, j) == 1.0) labels[i] = static_cast<int>(j);
  return Partition::from_assignment(labels);
}

// Whether every column of y lies in the span of the indicator's columns,
// i.e. is constant on each class. Deviations are measured against the class
// mean, absolutely, so tol = 0 demands exact membership.
inline bool span_membership(const Matrix& y, const Matrix& indicator, double tol) {
  detail::check_indicator(indicator);
  if (y.rows() != indicator.rows())
    throw std::invalid_argument("span_membership: row count mismatch");
  const Partition p = partition_from_indicator(indicator);
  const int k = p.class_count();
  for (std::size_t c = 0; c < y.cols(); ++c) {
    std::vector<double> mean(k, 0.0);
    for (int i = 0; i < p.size(); ++i) mean[p.class_of(i)] += y(i, c);
    for (int g = 0; g < k; ++g) mean[g] /= p.class_sizes()[g];
    for (int i = 0; i < p.size(); ++i)
      if (std::abs(y(i, c) - mean[p.class_of(i)]) > tol) return false;
  }
  return true;
}

// Partition recovery against a matrix-vector oracle. Starting from the
// initial classes, each round probes the oracle with the current indicator
// and splits classes whose members receive different responses; the loop
// stops once the response lies in the span of the probes. The trace holds
// the partition before each probe, ending with the stable one.
inline std::vector<Partition> blind_wl_trace(const Oracle& oracle, const Partition& init,
                                             double tol = 0.0) {
  if (oracle.dimension != init.size())
    throw std::invalid_argument("blind_wl: oracle dimension does not match the partition");
  std::vector<Partition> trace;
  trace.push_back(Partition::from_assignment(init.assignment()));
  for (int round = 0; round <= oracle.dimension; ++round) {
    const Matrix y = oracle.apply(indicator_matrix(trace.back()));
    if (y.rows() != static_cast<std::size_t>(oracle.dimension))
      throw std::invalid_argument("blind_wl: oracle returned a response of the wrong shape");
    Partition next = detail::split_by_columns(trace.back(), y, tol);
    if (next == trace.back()) return trace;
    trace.push_back(std::move(next));
  }
  throw std::runtime_error("blind_wl: oracle did not stabilize within " +
                           std::to_string(oracle.dimension) + " rounds");
}

inline Partition blind_wl(const Oracle& oracle, const Partition& init, double tol = 0.0) {
  return blind_wl_trace(oracle, init, tol).back();
}

inline Partition blind_wl(const Oracle& oracle) {
  return blind_wl(oracle, Partition::single_class(oracle.dimension));
}

}  // namespace blindep
