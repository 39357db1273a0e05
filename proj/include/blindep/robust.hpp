#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "blindep/gmm.hpp"
#include "blindep/matrix.hpp"
#include "blindep/oracle.hpp"
#include "blindep/partition.hpp"
#include "blindep/seeds.hpp"
#include "blindep/spectral.hpp"

namespace blindep {

enum class ComponentSelection {
  kFixed,  // cluster into exactly max_components groups per round
  kBic,    // choose the component count in 1..max_components by BIC
};

struct RobustConfig {
  int max_components = 6;
  double covariance_regularizer = 1e-6;
  int em_restarts = 3;
  ComponentSelection component_selection = ComponentSelection::kBic;
};

struct RobustResult {
  Partition partition;
  bool converged = true;  // false when the round cap was hit before a repeat
  int rounds = 0;
};

namespace detail {

// Best mixture fit for a requested component count: one EM run seeded from a
// k-means solution (the workhorse; EM from random responsibilities stalls in
// local optima far more often than k-means does), plus random restarts up to
// the configured total. Ties go to the earlier run.
inline GmmFit clustered_gmm(const Matrix& rows, int components, double regularizer, int restarts,
                            std::uint64_t seed) {
  GmmFit best;
  if (components > 1) {
    const KmeansResult km =
        kmeans(rows, components, 8, derive_seed(seed, {static_cast<std::uint64_t>(components), 0}));
    best = fit_gmm_from(rows, gmm_from_labels(rows, km.labels, components, regularizer),
                        regularizer);
  } else {
    auto rng = make_engine(seed, {static_cast<std::uint64_t>(components), 1});
    best = fit_gmm_diag(rows, components, regularizer, rng);
  }
  for (int r = 1; r < restarts; ++r) {
    auto rng =
        make_engine(seed, {static_cast<std::uint64_t>(components), static_cast<std::uint64_t>(r + 1)});
    GmmFit cur = fit_gmm_diag(rows, components, regularizer, rng);
    if (cur.log_likelihood > best.log_likelihood) best = std::move(cur);
  }
  return best;
}

// Centers every column and scales it to unit variance; constant columns are
// only centered. Keeps the 0/1 indicator block and the response block on
// comparable scales for the distance-based seeding.
inline void standardize_columns(Matrix& features) {
  const std::size_t n = features.rows();
  for (std::size_t c = 0; c < features.cols(); ++c) {
    double mean = 0.0, var = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += features(i, c);
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = features(i, c) - mean;
      var += diff * diff;
    }
    const double scale = var > 0.0 ? 1.0 / std::sqrt(var / static_cast<double>(n)) : 1.0;
    for (std::size_t i = 0; i < n; ++i) features(i, c) = (features(i, c) - mean) * scale;
  }
}

}  // namespace detail

// Noise-tolerant partition recovery. Each round probes the oracle with the
// indicator of the current classes and regroups the rows of the standardized
// concatenation [O(B) | B] with one Gaussian mixture across all nodes,
// replacing the exact row-equality test of the noiseless loop. Joining the
// indicator block to the response realizes the same conjunction the exact
// algorithm uses, but softly: the mixture can inflate the variance of
// indicator columns that contradict the response, so an earlier bad split
// can be coarsened away, which a per-class scheme could never do. Under BIC
// the component count is chosen in 1..max_components each round; the fixed
// rule always requests max_components (degenerate components may still be
// dropped). The loop stops when a round leaves the partition unchanged, or
// flags non-convergence after n rounds.
inline RobustResult robust_blind_wl(const Oracle& oracle, const RobustConfig& config,
                                    std::uint64_t seed) {
  if (oracle.dimension <= 0) throw std::invalid_argument("robust_blind_wl: empty oracle");
  if (config.max_components <= 0)
    throw std::invalid_argument("robust_blind_wl: max_components must be positive");
  if (config.em_restarts <= 0)
    throw std::invalid_argument("robust_blind_wl: em_restarts must be positive");
  if (config.covariance_regularizer <= 0.0)
    throw std::invalid_argument("robust_blind_wl: regularizer must be positive");
  const int n = oracle.dimension;

  RobustResult out;
  out.partition = Partition::single_class(n);
  for (int round = 0; round < n; ++round) {
    const Matrix b = indicator_matrix(out.partition);
    const Matrix y = oracle.apply(b);
    if (y.rows() != static_cast<std::size_t>(n))
      throw std::invalid_argument("robust_blind_wl: oracle returned a response of the wrong shape");

    Matrix features(static_cast<std::size_t>(n), y.cols() + b.cols());
    for (int i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < y.cols(); ++c) features(i, c) = y(i, c);
      for (std::size_t c = 0; c < b.cols(); ++c) features(i, y.cols() + c) = b(i, c);
    }
    detail::standardize_columns(features);

    const int cap = std::min(config.max_components, n);
    const std::uint64_t round_seed =
        detail::derive_seed(seed, {detail::kStreamGmm, static_cast<std::uint64_t>(round)});
    GmmFit best;
    if (config.component_selection == ComponentSelection::kBic) {
      double best_bic = std::numeric_limits<double>::infinity();
      for (int m = 1; m <= cap; ++m) {
        GmmFit fit = detail::clustered_gmm(features, m, config.covariance_regularizer,
                                           config.em_restarts, round_seed);
        const double bic = gmm_bic(fit, features.rows());
        if (bic < best_bic) {
          best_bic = bic;
          best = std::move(fit);
        }
      }
    } else {
      best = detail::clustered_gmm(features, cap, config.covariance_regularizer,
                                   config.em_restarts, round_seed);
    }

    Partition next = Partition::from_assignment(gmm_labels(best, features));
    ++out.rounds;
    if (next == out.partition) {
      out.converged = true;
      return out;
    }
    out.partition = std::move(next);
  }
  out.converged = false;
  return out;
}

}  // namespace blindep
