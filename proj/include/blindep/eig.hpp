#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "blindep/matrix.hpp"

namespace blindep {

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // descending
  Matrix eigenvectors;              // column j pairs with eigenvalues[j]; empty if not requested
};

namespace detail {

// Householder reduction of a symmetric matrix to tridiagonal form, followed
// by the implicit-shift QL iteration. Textbook algorithm, zero-indexed. When
// with_vectors is set, the orthogonal transformations are accumulated in a,
// whose columns end up holding the eigenvectors of the original matrix.
inline void tridiagonalize(Matrix& a, std::vector<double>& d, std::vector<double>& e,
                           bool with_vectors) {
  const int n = static_cast<int>(a.rows());
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0;
    double scale = 0.0;
    if (l > 0) {
      for (int k = 0; k <= l; ++k) scale += std::abs(a(i, k));
      if (scale == 0.0) {
        e[i] = a(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          a(i, k) /= scale;
          h += a(i, k) * a(i, k);
        }
        double f = a(i, l);
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        a(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          if (with_vectors) a(j, i) = a(i, j) / h;
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
          for (int k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
          e[j] = g / h;
          f += e[j] * a(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = a(i, j);
          g = e[j] - hh * f;
          e[j] = g;
          for (int k = 0; k <= j; ++k) a(j, k) -= f * e[k] + g * a(i, k);
        }
      }
    } else {
      e[i] = a(i, l);
    }
    d[i] = h;
  }
  if (with_vectors) d[0] = 0.0;
  e[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    if (with_vectors) {
      const int l = i - 1;
      if (d[i] != 0.0) {
        for (int j = 0; j <= l; ++j) {
          double g = 0.0;
          for (int k = 0; k <= l; ++k) g += a(i, k) * a(k, j);
          for (int k = 0; k <= l; ++k) a(k, j) -= g * a(k, i);
        }
      }
      d[i] = a(i, i);
      a(i, i) = 1.0;
      for (int j = 0; j <= l; ++j) a(j, i) = a(i, j) = 0.0;
    } else {
      d[i] = a(i, i);
    }
  }
}

inline void ql_iterate(std::vector<double>& d, std::vector<double>& e, Matrix* z,
                       int iteration_budget) {
  const int n = static_cast<int>(d.size());
  const double eps = std::numeric_limits<double>::epsilon();
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  // Deflation threshold: relative to the local diagonal, floored at the
  // matrix norm scale. A pure-relative test can spin forever on blocks of
  // exact zeros (rank-deficient inputs reduce to those), where neighboring
  // diagonal entries are rounding-level junk; dropping an off-diagonal entry
  // of size eps * |T| only perturbs eigenvalues at the backward error the
  // reduction already committed.
  double anorm = 0.0;
  for (int i = 0; i < n; ++i) anorm = std::max(anorm, std::abs(d[i]) + std::abs(e[i]));
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * (dd + anorm)) break;
      }
      if (m != l) {
        if (iter++ == iteration_budget)
          throw std::runtime_error("symmetric_eig: QL iteration exceeded its budget of " +
                                   std::to_string(iteration_budget) + " sweeps per eigenvalue");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (z) {
            for (int k = 0; k < n; ++k) {
              f = (*z)(k, i + 1);
              (*z)(k, i + 1) = s * (*z)(k, i) + c * f;
              (*z)(k, i) = c * (*z)(k, i) - s * f;
            }
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace detail

// Full eigendecomposition of a symmetric matrix. Eigenvalues come back in
// descending order; each eigenvector column is normalized and flipped so its
// first entry of magnitude above 1e-12 is positive, which pins an otherwise
// arbitrary sign and keeps results comparable across runs.
inline EigenDecomposition symmetric_eig(const Matrix& m, bool with_vectors = true,
                                        int iteration_budget = 30) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("symmetric_eig: matrix must be square and nonempty");
  if (!is_symmetric(m, 1e-10))
    throw std::invalid_argument("symmetric_eig: matrix is not symmetric within tolerance");
  const std::size_t n = m.rows();
  Matrix a = m;
  std::vector<double> d, e;
  detail::tridiagonalize(a, d, e, with_vectors);
  detail::ql_iterate(d, e, with_vectors ? &a : nullptr, iteration_budget);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return d[x] > d[y]; });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.eigenvalues[j] = d[order[j]];
  if (with_vectors) {
    out.eigenvectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t src = order[j];
      double flip = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(a(i, src)) > 1e-12) {
          flip = a(i, src) > 0.0 ? 1.0 : -1.0;
          break;
        }
      }
      for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = flip * a(i, src);
    }
  }
  return out;
}

inline std::vector<double> symmetric_eigenvalues(const Matrix& m) {
  return symmetric_eig(m, false).eigenvalues;
}

// Spectral norm of a symmetric matrix: the largest eigenvalue magnitude.
inline double spectral_norm(const Matrix& m) {
  const std::vector<double> ev = symmetric_eigenvalues(m);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

}  // namespace blindep
