#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "blindep/gmm.hpp"
#include "blindep/partition.hpp"
#include "blindep/seeds.hpp"
#include "blindep/spectral.hpp"

using namespace blindep;

namespace {

// Rows of points scattered around the given 2d centers, count points each.
Matrix blobs(const std::vector<std::pair<double, double>>& centers, int count, double spread,
             std::uint64_t seed) {
  auto rng = detail::make_engine(seed, {41});
  std::normal_distribution<double> noise(0.0, spread);
  Matrix rows(centers.size() * count, 2);
  std::size_t r = 0;
  for (const auto& c : centers)
    for (int i = 0; i < count; ++i, ++r) {
      rows(r, 0) = c.first + noise(rng);
      rows(r, 1) = c.second + noise(rng);
    }
  return rows;
}

std::vector<int> block_labels(int blocks, int count) {
  std::vector<int> labels;
  for (int b = 0; b < blocks; ++b) labels.insert(labels.end(), count, b);
  return labels;
}

}  // namespace

TEST_CASE("kmeans recovers well separated clusters exactly", "[cluster]") {
  Matrix rows = blobs({{0, 0}, {10, 0}, {0, 10}}, 20, 0.3, 1100);
  KmeansResult km = kmeans(rows, 3, 5, 7);
  CHECK(Partition::from_assignment(km.labels) ==
        Partition::from_assignment(block_labels(3, 20)));
  CHECK(km.inertia < 20.0 * 3 * 2 * 0.3);

  for (int c = 0; c < 3; ++c) {
    double best = 1e9;
    for (auto [x, y] : {std::pair{0.0, 0.0}, {10.0, 0.0}, {0.0, 10.0}}) {
      const double dx = km.centroids(c, 0) - x;
      const double dy = km.centroids(c, 1) - y;
      best = std::min(best, std::hypot(dx, dy));
    }
    CHECK(best < 0.5);
  }
}

TEST_CASE("single cluster kmeans returns the centroid of everything", "[cluster]") {
  Matrix rows(4, 1);
  rows(0, 0) = 1.0; rows(1, 0) = 3.0; rows(2, 0) = 5.0; rows(3, 0) = 7.0;
  KmeansResult km = kmeans(rows, 1, 3, 9);
  CHECK_THAT(km.centroids(0, 0), Catch::Matchers::WithinAbs(4.0, 1e-12));
  CHECK_THAT(km.inertia, Catch::Matchers::WithinAbs(20.0, 1e-12));
}

TEST_CASE("kmeans is deterministic for a fixed seed and validates input", "[cluster]") {
  Matrix rows = blobs({{0, 0}, {5, 5}}, 15, 0.5, 1200);
  KmeansResult a = kmeans(rows, 2, 4, 42);
  KmeansResult b = kmeans(rows, 2, 4, 42);
  CHECK(a.labels == b.labels);
  CHECK(a.inertia == b.inertia);

  CHECK_THROWS_AS(kmeans(rows, 0, 4, 42), std::invalid_argument);
  CHECK_THROWS_AS(kmeans(rows, 31, 4, 42), std::invalid_argument);
  CHECK_THROWS_AS(kmeans(rows, 2, 0, 42), std::invalid_argument);
}

TEST_CASE("mixture fit separates two blobs", "[cluster]") {
  Matrix rows = blobs({{0, 0}, {12, 0}}, 50, 1.0, 1300);
  GmmFit fit = best_gmm(rows, 2, 3, 1e-6, 77);
  REQUIRE(fit.components() == 2);

  std::vector<int> labels = gmm_labels(fit, rows);
  CHECK(Partition::from_assignment(labels) ==
        Partition::from_assignment(block_labels(2, 50)));
  CHECK_THAT(fit.weights[0] + fit.weights[1], Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK_THAT(fit.weights[0], Catch::Matchers::WithinAbs(0.5, 0.05));
}

TEST_CASE("information criterion picks the true component count", "[cluster]") {
  Matrix rows = blobs({{0, 0}, {12, 0}}, 100, 1.0, 1400);
  double best_score = 0.0;
  int best_m = 0;
  for (int m = 1; m <= 4; ++m) {
    GmmFit fit = best_gmm(rows, m, 3, 1e-6, 88);
    const double score = gmm_bic(fit, rows.rows());
    if (best_m == 0 || score < best_score) {
      best_score = score;
      best_m = fit.components();
    }
  }
  CHECK(best_m == 2);
}

TEST_CASE("components that lose all mass are dropped during the fit", "[cluster]") {
  auto rng = detail::make_engine(1500, {41});
  std::normal_distribution<double> noise(0.0, 0.2);
  Matrix rows(50, 1);
  for (std::size_t i = 0; i < 50; ++i) rows(i, 0) = noise(rng);

  GmmFit init;
  init.means = Matrix(2, 1);
  init.means(1, 0) = 1e6;
  init.variances = Matrix(2, 1);
  init.variances(0, 0) = init.variances(1, 0) = 1.0;
  init.weights = {0.5, 0.5};

  GmmFit fit = fit_gmm_from(rows, std::move(init), 1e-6);
  CHECK(fit.components() == 1);
  REQUIRE(fit.weights.size() == 1);
  CHECK_THAT(fit.weights[0], Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK_THAT(fit.means(0, 0), Catch::Matchers::WithinAbs(0.0, 0.2));
}

TEST_CASE("label seeded mixtures match per cluster moments", "[cluster]") {
  Matrix rows(4, 1);
  rows(0, 0) = 0.0; rows(1, 0) = 2.0; rows(2, 0) = 10.0; rows(3, 0) = 14.0;
  GmmFit fit = gmm_from_labels(rows, {0, 0, 1, 1}, 2, 1e-6);
  CHECK_THAT(fit.means(0, 0), Catch::Matchers::WithinAbs(1.0, 1e-15));
  CHECK_THAT(fit.means(1, 0), Catch::Matchers::WithinAbs(12.0, 1e-15));
  CHECK_THAT(fit.variances(0, 0), Catch::Matchers::WithinAbs(1.0, 1e-15));
  CHECK_THAT(fit.variances(1, 0), Catch::Matchers::WithinAbs(4.0, 1e-15));
  CHECK_THAT(fit.weights[0], Catch::Matchers::WithinAbs(0.5, 1e-15));

  // An empty cluster keeps a small smoothed weight and a floored variance, so
  // EM started from this fit cannot divide by zero.
  GmmFit lone = gmm_from_labels(rows, {0, 0, 0, 0}, 2, 1e-6);
  CHECK_THAT(lone.weights[1], Catch::Matchers::WithinAbs(0.125 / 1.125, 1e-15));
  CHECK_THAT(lone.variances(1, 0), Catch::Matchers::WithinAbs(1e-6, 1e-20));

  CHECK_THROWS_AS(gmm_from_labels(rows, {0, 0, 1}, 2, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(gmm_from_labels(rows, {0, 0, 1, 2}, 2, 1e-6), std::invalid_argument);
}

TEST_CASE("information criterion charges weights means and variances", "[cluster]") {
  GmmFit fit;
  fit.means = Matrix(3, 2);
  fit.variances = Matrix(3, 2);
  fit.weights = {0.2, 0.3, 0.5};
  fit.log_likelihood = -100.0;
  const double expected = 200.0 + 14.0 * std::log(50.0);
  CHECK_THAT(gmm_bic(fit, 50), Catch::Matchers::WithinAbs(expected, 1e-12));
}

TEST_CASE("hard assignment follows the larger posterior", "[cluster]") {
  GmmFit fit;
  fit.means = Matrix(2, 1);
  fit.means(1, 0) = 10.0;
  fit.variances = Matrix(2, 1);
  fit.variances(0, 0) = fit.variances(1, 0) = 1.0;
  fit.weights = {0.5, 0.5};

  Matrix rows(4, 1);
  rows(0, 0) = -1.0; rows(1, 0) = 1.0; rows(2, 0) = 9.0; rows(3, 0) = 11.0;
  CHECK(gmm_labels(fit, rows) == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("mixture fitting rejects malformed requests", "[cluster]") {
  Matrix rows(5, 1);
  auto rng = detail::make_engine(1, {41});
  CHECK_THROWS_AS(fit_gmm_diag(rows, 0, 1e-6, rng), std::invalid_argument);
  CHECK_THROWS_AS(fit_gmm_diag(rows, 2, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(fit_gmm_from(Matrix(0, 0), GmmFit{}, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(best_gmm(rows, 2, 0, 1e-6, 1), std::invalid_argument);
}
