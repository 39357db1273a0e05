#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "blindep/matrix.hpp"
#include "blindep/seeds.hpp"

namespace blindep {

// Gaussian mixture with diagonal covariances, fit by EM. Used to group near
// identical rows of noisy matrices, so the implementation favors determinism
// over generality. Components that lose all responsibility mass during EM
// are dropped, so a fit may end with fewer components than requested.
struct GmmFit {
  Matrix means;                 // m x d
  Matrix variances;             // m x d, floored at the regularizer
  std::vector<double> weights;  // m
  double log_likelihood = -std::numeric_limits<double>::infinity();
  bool converged = false;

  int components() const { return static_cast<int>(weights.size()); }
};

namespace detail {

constexpr double kLogTwoPi = 1.8378770664093453;

inline double gmm_log_density(const GmmFit& fit, int j, const double* x, std::size_t d) {
  double acc = std::log(fit.weights[j]);
  for (std::size_t t = 0; t < d; ++t) {
    const double v = fit.variances(j, t);
    const double diff = x[t] - fit.means(j, t);
    acc -= 0.5 * (kLogTwoPi + std::log(v) + diff * diff / v);
  }
  return acc;
}

inline void gmm_init(GmmFit& fit, const Matrix& rows, int m, double regularizer,
                     std::mt19937_64& rng) {
  const std::size_t n = rows.rows();
  const std::size_t d = rows.cols();
  fit.means = Matrix(static_cast<std::size_t>(m), d);
  fit.variances = Matrix(static_cast<std::size_t>(m), d);
  fit.weights.assign(m, 1.0 / m);

  std::vector<double> global_var(d, 0.0), mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < d; ++t) mean[t] += rows(i, t);
  for (std::size_t t = 0; t < d; ++t) mean[t] /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < d; ++t) {
      const double diff = rows(i, t) - mean[t];
      global_var[t] += diff * diff;
    }
  for (std::size_t t = 0; t < d; ++t)
    global_var[t] = std::max(global_var[t] / static_cast<double>(n), regularizer);

  // Means seeded like k-means++, variances at the global spread.
  std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  for (int j = 0; j < m; ++j) {
    if (j > 0) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t t = 0; t < d; ++t) {
          const double diff = rows(i, t) - fit.means(j - 1, t);
          acc += diff * diff;
        }
        dist2[i] = std::min(dist2[i], acc);
        total += dist2[i];
      }
      if (total > 0.0) {
        const double target = unit(rng) * total;
        double acc = 0.0;
        pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
          acc += dist2[i];
          if (acc >= target) {
            pick = i;
            break;
          }
        }
      } else {
        pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
      }
    }
    for (std::size_t t = 0; t < d; ++t) {
      fit.means(j, t) = rows(pick, t);
      fit.variances(j, t) = global_var[t];
    }
  }
}

}  // namespace detail

// Runs EM from an already initialized fit until the log-likelihood settles.
inline GmmFit fit_gmm_from(const Matrix& rows, GmmFit fit, double regularizer,
                           int max_iter = 200) {
  const std::size_t n = rows.rows();
  const std::size_t d = rows.cols();
  if (n == 0 || d == 0) throw std::invalid_argument("fit_gmm_from: empty data");
  if (regularizer <= 0.0) throw std::invalid_argument("fit_gmm_from: regularizer must be positive");
  int m = static_cast<int>(fit.weights.size());
  if (m <= 0 || fit.means.rows() != static_cast<std::size_t>(m) || fit.means.cols() != d)
    throw std::invalid_argument("fit_gmm_from: malformed initialization");

  Matrix resp(n, static_cast<std::size_t>(m));
  std::vector<double> logp(m);
  double prev_ll = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < max_iter; ++iter) {
    // E step with the usual log-sum-exp guard.
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double lmax = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < m; ++j) {
        logp[j] = detail::gmm_log_density(fit, j, rows.row(i), d);
        lmax = std::max(lmax, logp[j]);
      }
      double z = 0.0;
      for (int j = 0; j < m; ++j) z += std::exp(logp[j] - lmax);
      ll += lmax + std::log(z);
      for (int j = 0; j < m; ++j) resp(i, j) = std::exp(logp[j] - lmax) / z;
    }

    // M step. Components whose responsibility mass collapses are dropped and
    // the loop continues with the survivors; at least one always survives
    // because the per-point responsibilities sum to one.
    std::vector<double> mass(m, 0.0);
    bool dropped = false;
    for (int j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < n; ++i) mass[j] += resp(i, j);
      if (mass[j] < 1e-8) dropped = true;
    }
    int kept = 0;
    for (int j = 0; j < m; ++j) {
      if (mass[j] < 1e-8) continue;
      const double nj = mass[j];
      fit.weights[kept] = nj / static_cast<double>(n);
      for (std::size_t t = 0; t < d; ++t) {
        double mu = 0.0;
        for (std::size_t i = 0; i < n; ++i) mu += resp(i, j) * rows(i, t);
        mu /= nj;
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double diff = rows(i, t) - mu;
          var += resp(i, j) * diff * diff;
        }
        fit.means(kept, t) = mu;
        fit.variances(kept, t) = std::max(var / nj, regularizer);
      }
      ++kept;
    }
    if (dropped) {
      Matrix means(kept, d), variances(kept, d);
      for (int j = 0; j < kept; ++j)
        for (std::size_t t = 0; t < d; ++t) {
          means(j, t) = fit.means(j, t);
          variances(j, t) = fit.variances(j, t);
        }
      fit.means = std::move(means);
      fit.variances = std::move(variances);
      fit.weights.resize(kept);
      m = kept;
    }
    double wsum = 0.0;
    for (double w : fit.weights) wsum += w;
    for (double& w : fit.weights) w /= wsum;

    fit.log_likelihood = ll;
    if (!dropped && std::abs(ll - prev_ll) <= 1e-9 * (1.0 + std::abs(ll))) {
      fit.converged = true;
      break;
    }
    prev_ll = ll;
  }
  return fit;
}

inline GmmFit fit_gmm_diag(const Matrix& rows, int components, double regularizer,
                           std::mt19937_64& rng, int max_iter = 200) {
  if (components <= 0) throw std::invalid_argument("fit_gmm_diag: component count must be positive");
  if (regularizer <= 0.0) throw std::invalid_argument("fit_gmm_diag: regularizer must be positive");
  GmmFit fit;
  detail::gmm_init(fit, rows, components, regularizer, rng);
  return fit_gmm_from(rows, std::move(fit), regularizer, max_iter);
}

// Moment-matching initialization from hard labels (typically a k-means
// solution): per-cluster means, variances and weights, floored and smoothed
// so EM can run from it even when a cluster came back empty.
inline GmmFit gmm_from_labels(const Matrix& rows, const std::vector<int>& labels, int components,
                              double regularizer) {
  const std::size_t n = rows.rows();
  const std::size_t d = rows.cols();
  if (labels.size() != n) throw std::invalid_argument("gmm_from_labels: label count mismatch");
  GmmFit fit;
  fit.means = Matrix(static_cast<std::size_t>(components), d);
  fit.variances = Matrix(static_cast<std::size_t>(components), d);
  fit.weights.assign(components, 0.0);
  std::vector<int> counts(components, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0 || labels[i] >= components)
      throw std::invalid_argument("gmm_from_labels: label out of range");
    ++counts[labels[i]];
    for (std::size_t t = 0; t < d; ++t) fit.means(labels[i], t) += rows(i, t);
  }
  for (int j = 0; j < components; ++j)
    if (counts[j] > 0)
      for (std::size_t t = 0; t < d; ++t) fit.means(j, t) /= counts[j];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < d; ++t) {
      const double diff = rows(i, t) - fit.means(labels[i], t);
      fit.variances(labels[i], t) += diff * diff;
    }
  for (int j = 0; j < components; ++j) {
    fit.weights[j] = std::max(static_cast<double>(counts[j]), 0.5) / static_cast<double>(n);
    for (std::size_t t = 0; t < d; ++t) {
      const double var = counts[j] > 0 ? fit.variances(j, t) / counts[j] : 0.0;
      fit.variances(j, t) = std::max(var, regularizer);
    }
  }
  double wsum = 0.0;
  for (double w : fit.weights) wsum += w;
  for (double& w : fit.weights) w /= wsum;
  return fit;
}

// Best fit over deterministic restarts, by log-likelihood; first wins ties.
inline GmmFit best_gmm(const Matrix& rows, int components, int restarts, double regularizer,
                       std::uint64_t seed) {
  if (restarts <= 0) throw std::invalid_argument("best_gmm: restarts must be positive");
  GmmFit best;
  for (int r = 0; r < restarts; ++r) {
    auto rng = detail::make_engine(
        seed, {detail::kStreamGmm, static_cast<std::uint64_t>(components),
               static_cast<std::uint64_t>(r)});
    GmmFit cur = fit_gmm_diag(rows, components, regularizer, rng);
    if (cur.log_likelihood > best.log_likelihood) best = std::move(cur);
  }
  return best;
}

inline std::vector<int> gmm_labels(const GmmFit& fit, const Matrix& rows) {
  const std::size_t n = rows.rows();
  const std::size_t d = rows.cols();
  const int m = static_cast<int>(fit.weights.size());
  std::vector<int> labels(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      const double lp = detail::gmm_log_density(fit, j, rows.row(i), d);
      if (lp > best) {
        best = lp;
        labels[i] = j;
      }
    }
  }
  return labels;
}

// Bayesian information criterion; lower is better. Free parameters: mixture
// weights, means and diagonal variances.
inline double gmm_bic(const GmmFit& fit, std::size_t sample_count) {
  const double m = static_cast<double>(fit.weights.size());
  const double d = static_cast<double>(fit.means.cols());
  const double params = (m - 1.0) + 2.0 * m * d;
  return -2.0 * fit.log_likelihood + params * std::log(static_cast<double>(sample_count));
}

}  // namespace blindep
