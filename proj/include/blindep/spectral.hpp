#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "blindep/eig.hpp"
#include "blindep/graph.hpp"
#include "blindep/matrix.hpp"
#include "blindep/partition.hpp"
#include "blindep/quotient.hpp"
#include "blindep/seeds.hpp"
#include "blindep/signal.hpp"

namespace blindep {

struct TopEigvecs {
  Matrix vectors;            // n x k, leading eigenvector columns
  double cut_gap = 0.0;      // eigenvalue gap across the cut
  bool degenerate_cut = false;  // gap below 1e-10: the chosen subspace is not well defined
};

inline TopEigvecs top_k_eigvecs(const EigenDecomposition& eig, int k) {
  const std::size_t n = eig.eigenvectors.rows();
  if (k <= 0 || static_cast<std::size_t>(k) > n)
    throw std::invalid_argument("top_k_eigvecs: k out of range");
  TopEigvecs out;
  out.vectors = Matrix(n, static_cast<std::size_t>(k));
  for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j)
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = eig.eigenvectors(i, j);
  if (static_cast<std::size_t>(k) < n) {
    out.cut_gap = eig.eigenvalues[k - 1] - eig.eigenvalues[k];
    out.degenerate_cut = out.cut_gap < 1e-10;
  }
  return out;
}

// Projection distance between the column spans of u and the normalized
// indicator of p: || u u^T - Hn Hn^T ||_F^2, evaluated through k x k Gram
// matrices. Zero iff the two spans coincide (for orthonormal u).
inline double f_cost(const Matrix& u, const Partition& p) {
  if (u.rows() != static_cast<std::size_t>(p.size()))
    throw std::invalid_argument("f_cost: row count mismatch");
  const Matrix hn = normalized_indicator(p);
  const Matrix uu = multiply_abt(transpose(u), transpose(u));    // u^T u
  const Matrix uh = multiply(transpose(u), hn);                  // u^T Hn
  double tr_uu2 = 0.0;
  for (std::size_t i = 0; i < uu.rows(); ++i)
    for (std::size_t j = 0; j < uu.cols(); ++j) tr_uu2 += uu(i, j) * uu(j, i);
  double cross = 0.0;
  for (double v : uh.data()) cross += v * v;
  // Hn^T Hn is the identity, so its squared trace term is just k.
  const double tr_hh2 = static_cast<double>(p.class_count());
  return tr_uu2 - 2.0 * cross + tr_hh2;
}

struct KmeansResult {
  std::vector<int> labels;
  Matrix centroids;  // k x d
  double inertia = 0.0;
};

namespace detail {

inline double sq_dist(const double* a, const double* b, std::size_t d) {
  double acc = 0.0;
  for (std::size_t t = 0; t < d; ++t) {
    const double diff = a[t] - b[t];
    acc += diff * diff;
  }
  return acc;
}

inline KmeansResult kmeans_once(const Matrix& rows, int k, std::mt19937_64& rng) {
  const std::size_t n = rows.rows();
  const std::size_t d = rows.cols();
  Matrix centroids(static_cast<std::size_t>(k), d);

  // k-means++ seeding: first centroid uniform, the rest proportional to the
  // squared distance from the nearest centroid chosen so far.
  std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t first = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  for (std::size_t t = 0; t < d; ++t) centroids(0, t) = rows(first, t);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dist2[i] = std::min(dist2[i], sq_dist(rows.row(i), centroids.row(c - 1), d));
      total += dist2[i];
    }
    std::size_t chosen = 0;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += dist2[i];
        if (acc >= target) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }
    for (std::size_t t = 0; t < d; ++t) centroids(c, t) = rows(chosen, t);
  }

  std::vector<int> labels(n, 0);
  std::vector<int> counts(k, 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist(rows.row(i), centroids.row(0), d);
      for (int c = 1; c < k; ++c) {
        const double dd = sq_dist(rows.row(i), centroids.row(c), d);
        if (dd < best_d) {
          best_d = dd;
          best = c;
        }
      }
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    centroids = Matrix(static_cast<std::size_t>(k), d);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[labels[i]];
      for (std::size_t t = 0; t < d; ++t) centroids(labels[i], t) += rows(i, t);
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Empty cluster: restart it at the point farthest from its centroid.
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double dd = sq_dist(rows.row(i), centroids.row(labels[i]), d);
          if (dd > far_d && counts[labels[i]] > 1) {
            far_d = dd;
            far = i;
          }
        }
        for (std::size_t t = 0; t < d; ++t) centroids(c, t) = rows(far, t);
        --counts[labels[far]];
        labels[far] = c;
        counts[c] = 1;
        continue;
      }
      for (std::size_t t = 0; t < d; ++t) centroids(c, t) /= counts[c];
    }
  }

  KmeansResult out;
  out.labels = std::move(labels);
  out.centroids = std::move(centroids);
  for (std::size_t i = 0; i < n; ++i)
    out.inertia += sq_dist(rows.row(i), out.centroids.row(out.labels[i]), d);
  return out;
}

}  // namespace detail

// Lloyd's algorithm with k-means++ seeding and deterministic restarts; the
// run with the lowest within-cluster cost wins, first on ties.
inline KmeansResult kmeans(const Matrix& rows, int k, int restarts, std::uint64_t seed) {
  if (k <= 0 || static_cast<std::size_t>(k) > rows.rows())
    throw std::invalid_argument("kmeans: cluster count out of range");
  if (restarts <= 0) throw std::invalid_argument("kmeans: restarts must be positive");
  KmeansResult best;
  for (int r = 0; r < restarts; ++r) {
    auto rng = detail::make_engine(seed, {detail::kStreamKmeans, static_cast<std::uint64_t>(r)});
    KmeansResult cur = detail::kmeans_once(rows, k, rng);
    if (r == 0 || cur.inertia < best.inertia) best = std::move(cur);
  }
  return best;
}

// Partition recovery from a covariance matrix: take the k leading
// eigenvectors and cluster their rows. Nodes in the same class share an
// eigenvector row whenever the covariance carries the class structure.
inline Partition spectral_extract(const Matrix& cov, int k, int restarts = 10,
                                  std::uint64_t seed = 0) {
  const EigenDecomposition eig = symmetric_eig(cov);
  const TopEigvecs top = top_k_eigvecs(eig, k);
  const KmeansResult km = kmeans(top.vectors, k, restarts, seed);
  return Partition::from_assignment(km.labels);
}

// Groups nodes by the entries of the dominant eigenvector. The dominant
// eigenvalue must be simple; entry values equal within tol (relative to the
// largest entry) land in the same class.
inline Partition perron_partition(const Graph& g, double tol = 1e-8) {
  const EigenDecomposition eig = symmetric_eig(g.adjacency());
  const std::size_t n = g.adjacency().rows();
  const double scale = std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
  if (n > 1 && eig.eigenvalues[0] - eig.eigenvalues[1] <= tol * scale)
    throw std::runtime_error("perron_partition: dominant eigenvalue is not simple");
  Matrix v(n, 1);
  double vmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v(i, 0) = eig.eigenvectors(i, 0);
    vmax = std::max(vmax, std::abs(v(i, 0)));
  }
  return detail::split_by_columns(Partition::single_class(static_cast<int>(n)), v, tol * vmax);
}

// Eigenpairs of the quotient under a filter, lifted to node level. The k x k
// matrix Hn^T f(A) Hn shares its spectrum with the filtered quotient, and
// lifting an eigenvector u through Hn gives an eigenvector of f(A) itself
// that is constant on classes up to per-class scaling.
struct QuotientEigenpairs {
  std::vector<double> eigenvalues;  // descending
  Matrix quotient_vectors;          // k x k, eigenvectors of the filtered quotient
  Matrix lifted;                    // n x k, orthonormal structural eigenvectors
};

inline QuotientEigenpairs quotient_eigenpairs(const Graph& g, const Partition& p,
                                              const FilterSpec& filter = identity_filter()) {
  const Matrix hn = normalized_indicator(p);
  const Matrix b = multiply(transpose(hn), multiply(g.adjacency(), hn));
  const Matrix fb = filter_matrix(b, filter);
  const EigenDecomposition eig = symmetric_eig(fb);
  QuotientEigenpairs out;
  out.eigenvalues = eig.eigenvalues;
  out.lifted = multiply(hn, eig.eigenvectors);
  // Unscale by the class sizes to express eigenvectors at quotient level.
  out.quotient_vectors = eig.eigenvectors;
  for (int i = 0; i < p.class_count(); ++i) {
    const double inv = 1.0 / std::sqrt(static_cast<double>(p.class_sizes()[i]));
    for (int j = 0; j < p.class_count(); ++j) out.quotient_vectors(i, j) *= inv;
  }
  return out;
}

// Structural eigenvectors of a symmetric matrix relative to a partition:
// positions of eigenvector columns that are constant on the classes. Within
// a degenerate eigenvalue group the individual columns are arbitrary, so the
// group is handled as a subspace: the dimension of its intersection with the
// indicator span determines how many of the group's indices are reported,
// and the basis holds vectors of the eigenspace that realize the overlap.
struct StructuralVectors {
  std::vector<int> indices;
  Matrix basis;  // n x indices.size(), orthonormal
};

inline StructuralVectors structural_vectors(const EigenDecomposition& eig, const Partition& p,
                                            double tol = 1e-8) {
  const std::size_t n = eig.eigenvectors.rows();
  if (n != static_cast<std::size_t>(p.size()))
    throw std::invalid_argument("structural_vectors: size mismatch");
  const Matrix hn = normalized_indicator(p);
  const int k = p.class_count();
  double scale = 0.0;
  for (double ev : eig.eigenvalues) scale = std::max(scale, std::abs(ev));
  const double group_tol = 1e-10 * std::max(1.0, scale);

  StructuralVectors out;
  std::vector<std::vector<double>> basis_cols;
  std::size_t g0 = 0;
  while (g0 < n) {
    std::size_t g1 = g0 + 1;
    while (g1 < n && eig.eigenvalues[g1 - 1] - eig.eigenvalues[g1] <= group_tol) ++g1;
    const std::size_t gs = g1 - g0;
    // Overlap of the eigenspace with the indicator span, via the Gram matrix
    // of the projected indicator columns.
    Matrix proj(gs, static_cast<std::size_t>(k));
    for (std::size_t a = 0; a < gs; ++a)
      for (int c = 0; c < k; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += eig.eigenvectors(i, g0 + a) * hn(i, c);
        proj(a, c) = acc;
      }
    const Matrix gram = multiply_abt(proj, proj);
    const EigenDecomposition overlap = symmetric_eig(gram);
    int dim = 0;
    for (std::size_t a = 0; a < gs; ++a)
      if (overlap.eigenvalues[a] >= 1.0 - tol) ++dim;
    for (int m = 0; m < dim; ++m) {
      out.indices.push_back(static_cast<int>(g0) + m);
      std::vector<double> col(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t a = 0; a < gs; ++a)
          acc += eig.eigenvectors(i, g0 + a) * overlap.eigenvectors(a, m);
        col[i] = acc;
      }
      basis_cols.push_back(std::move(col));
    }
    g0 = g1;
  }
  out.basis = Matrix(n, basis_cols.size());
  for (std::size_t j = 0; j < basis_cols.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) out.basis(i, j) = basis_cols[j][i];
  return out;
}

inline std::vector<int> structural_eigvec_indices(const EigenDecomposition& eig,
                                                  const Partition& p, double tol = 1e-8) {
  return structural_vectors(eig, p, tol).indices;
}

// Trace over spectral norm: how many dominant directions the matrix has.
inline double effective_rank(const Matrix& cov) {
  const std::vector<double> ev = symmetric_eigenvalues(cov);
  double trace = 0.0;
  for (double v : ev) trace += v;
  const double top = std::max(std::abs(ev.front()), std::abs(ev.back()));
  if (top == 0.0) throw std::invalid_argument("effective_rank: zero matrix");
  return trace / top;
}

// Parameters of the finite-sample recovery bound. theta and c are the
// absolute constants of the covariance concentration inequality; K is the
// sub-gaussian norm bound of the whitened samples, delta the eigengap at the
// subspace cut.
struct BoundParams {
  double sigma_norm = 1.0;  // spectral norm of the population covariance
  double r = 1.0;           // effective rank
  int n = 1;                // ambient dimension
  int s = 1;                // sample count
  int k = 1;                // subspace dimension
  double delta = 1.0;       // eigengap between k-th and (k+1)-th eigenvalue
  double K = 1.0;           // sub-gaussian norm bound
  double theta = 1.0;       // concentration constant
  double c = 1.0;           // probability constant
};

// Right-hand side of the recovery bound on sqrt(F): the covariance
// estimation error sqrt(K^2 r log(n/c) / s), plus its square for the
// non-asymptotic regime, scaled by the norm and the eigengap.
inline double recovery_bound(const BoundParams& p) {
  if (p.delta <= 0.0) return std::numeric_limits<double>::infinity();
  if (p.s <= 0 || p.n <= 0 || p.c <= 0.0) throw std::invalid_argument("recovery_bound: bad params");
  const double load = p.K * p.K * p.r * std::log(static_cast<double>(p.n) / p.c) / p.s;
  return std::sqrt(8.0 * p.k) * p.sigma_norm * p.theta * (std::sqrt(load) + load) / p.delta;
}

}  // namespace blindep
