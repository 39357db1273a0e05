#pragma once

#include <stdexcept>

#include "blindep/graph.hpp"
#include "blindep/matrix.hpp"
#include "blindep/partition.hpp"
#include "blindep/signal.hpp"
#include "blindep/spectral.hpp"

namespace blindep {

// All-or-nothing recovery score: 1 when the found partition groups the nodes
// exactly like the planted one. Class labels do not matter, both sides are
// compared in canonical form.
inline int graph_accuracy(const Partition& found, const Partition& planted) {
  if (found.size() != planted.size()) throw std::invalid_argument("graph_accuracy: size mismatch");
  return found == planted ? 1 : 0;
}

// Orthonormal basis of the structural eigenvectors of f(A) for the planted
// partition; the reference subspace that node_cost measures against. Split
// out so a harness can compute it once per graph and score many candidate
// partitions against it. The planted partition must be equitable: the basis
// is obtained by lifting the eigenvectors of the filtered quotient, which
// spans exactly the structural eigenspace at a fraction of the cost of an
// n-by-n eigendecomposition.
inline Matrix node_cost_basis(const Graph& g, const Partition& planted,
                              const FilterSpec& filter = identity_filter()) {
  return quotient_eigenpairs(g, planted, filter).lifted;
}

inline double node_cost_from_basis(const Matrix& basis, const Partition& found) {
  return f_cost(basis, found);
}

// Partition-level error: projection distance between the class span of the
// found partition and the structural eigenvector subspace of the planted
// one. Zero iff the found classes span the true structural directions.
inline double node_cost(const Partition& found, const Graph& g, const Partition& planted,
                        const FilterSpec& filter = identity_filter()) {
  return node_cost_from_basis(node_cost_basis(g, planted, filter), found);
}

}  // namespace blindep
