#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "blindep/graph.hpp"
#include "blindep/matrix.hpp"
#include "blindep/partition.hpp"
#include "blindep/quotient.hpp"

namespace blindep {

namespace detail {

// Splits the classes of p by the columns of s (one row of s per node).
// Within a class, values of a column are sorted and a new class starts
// wherever consecutive values differ by more than tol, so tol = 0 groups by
// exact equality and a small tol absorbs floating point fuzz. The result
// always refines p.
inline Partition split_by_columns(const Partition& p, const Matrix& s, double tol) {
  if (s.rows() != static_cast<std::size_t>(p.size()))
    throw std::invalid_argument("split_by_columns: row count mismatch");
  std::vector<int> group = p.assignment();
  int group_count = p.class_count();
  std::vector<std::vector<int>> members;
  std::vector<std::pair<double, int>> column;
  for (std::size_t c = 0; c < s.cols(); ++c) {
    members.assign(group_count, {});
    for (std::size_t i = 0; i < group.size(); ++i) members[group[i]].push_back(static_cast<int>(i));
    int next = 0;
    for (const auto& nodes : members) {
      if (nodes.empty()) continue;
      column.clear();
      for (int i : nodes) column.emplace_back(s(i, c), i);
      std::sort(column.begin(), column.end());
      int id = next++;
      group[column[0].second] = id;
      for (std::size_t t = 1; t < column.size(); ++t) {
        if (column[t].first - column[t - 1].first > tol) id = next++;
        group[column[t].second] = id;
      }
    }
    group_count = next;
  }
  return Partition::from_assignment(group);
}

}  // namespace detail

// One refinement round: nodes stay together iff they share a class and have
// equal per-class weight sums.
inline Partition refine_step(const Matrix& m, const Partition& p, double tol = 0.0) {
  return detail::split_by_columns(p, class_weight_sums(m, p), tol);
}

// Repeated refinement until stable. The returned trace starts with the
// (canonicalized) initial partition and ends with the fixed point.
inline std::vector<Partition> refine_trace(const Matrix& m, const Partition& init,
                                           double tol = 0.0) {
  if (m.rows() != m.cols()) throw std::invalid_argument("refine_trace: matrix not square");
  if (m.rows() != static_cast<std::size_t>(init.size()))
    throw std::invalid_argument("refine_trace: matrix/partition size mismatch");
  std::vector<Partition> trace;
  trace.push_back(Partition::from_assignment(init.assignment()));
  for (int round = 0; round <= init.size(); ++round) {
    Partition next = refine_step(m, trace.back(), tol);
    if (next == trace.back()) return trace;
    trace.push_back(std::move(next));
  }
  throw std::logic_error("refine_trace: did not stabilize within the node count");
}

// Coarsest partition of row indices that the matrix refines to from a single
// starting class.
inline Partition matrix_cep(const Matrix& m, double tol = 0.0) {
  return refine_trace(m, Partition::single_class(static_cast<int>(m.rows())), tol).back();
}

inline std::vector<Partition> wl_refine_trace(const Graph& g, const Partition& init) {
  return refine_trace(g.adjacency(), init, default_equitable_tol(g));
}

// Color refinement: the coarsest equitable partition that refines init.
inline Partition wl_refine(const Graph& g, const Partition& init) {
  return wl_refine_trace(g, init).back();
}

inline Partition wl_refine(const Graph& g) {
  return wl_refine(g, Partition::single_class(g.node_count()));
}

namespace detail {

// Visits every partition of {0,...,n-1} as a restricted growth string, which
// enumerates each set partition exactly once and already in canonical form.
template <typename Fn>
void for_each_partition(int n, Fn&& visit) {
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  for (;;) {
    visit(a);
    int i = n - 1;
    while (i > 0) {
      int prefix_max = 0;
      for (int j = 0; j < i; ++j) prefix_max = std::max(prefix_max, a[j]);
      if (a[i] <= prefix_max) break;
      --i;
    }
    if (i == 0) return;
    ++a[i];
    std::fill(a.begin() + i + 1, a.end(), 0);
  }
}

}  // namespace detail

// Every equitable partition of a small graph, by exhaustive enumeration.
inline std::vector<Partition> all_equitable_partitions(const Graph& g) {
  const int n = g.node_count();
  if (n > 10) throw std::invalid_argument("all_equitable_partitions: only supported for n <= 10");
  const double tol = default_equitable_tol(g);
  std::vector<Partition> out;
  detail::for_each_partition(n, [&](const std::vector<int>& labels) {
    Partition p = Partition::from_assignment(labels);
    if (is_equitable(g, p, tol)) out.push_back(std::move(p));
  });
  return out;
}

// Reference implementation of the coarsest equitable partition for small
// graphs: enumerate all equitable partitions, take the one with the fewest
// classes, and verify it is the unique coarsest element.
inline Partition brute_force_cep(const Graph& g) {
  const std::vector<Partition> eqs = all_equitable_partitions(g);
  const Partition* best = nullptr;
  for (const Partition& p : eqs)
    if (!best || p.class_count() < best->class_count()) best = &p;
  if (!best) throw std::logic_error("brute_force_cep: no equitable partition found");
  int at_minimum = 0;
  for (const Partition& p : eqs) {
    if (p.class_count() == best->class_count()) ++at_minimum;
    if (!refines(p, *best))
      throw std::logic_error("brute_force_cep: an equitable partition does not refine the coarsest");
  }
  if (at_minimum != 1)
    throw std::logic_error("brute_force_cep: coarsest equitable partition is not unique");
  return *best;
}

}  // namespace blindep
