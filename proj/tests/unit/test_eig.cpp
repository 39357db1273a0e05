#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "blindep/eig.hpp"
#include "blindep/matrix.hpp"
#include "blindep/seeds.hpp"

using namespace blindep;

namespace {

Matrix random_symmetric(int n, std::uint64_t seed) {
  auto rng = detail::make_engine(seed, {31});
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = unit(rng);
  return m;
}

Matrix reconstruct(const EigenDecomposition& eig) {
  const std::size_t n = eig.eigenvectors.rows();
  Matrix scaled_vecs = eig.eigenvectors;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) scaled_vecs(i, j) *= eig.eigenvalues[j];
  return multiply_abt(scaled_vecs, eig.eigenvectors);
}

}  // namespace

TEST_CASE("eigendecomposition reconstructs random symmetric matrices", "[eig]") {
  for (std::uint64_t t = 0; t < 10; ++t) {
    const int n = 5 + static_cast<int>(t * 3);
    Matrix m = random_symmetric(n, 900 + t);
    EigenDecomposition eig = symmetric_eig(m);

    const double scale = std::max(1.0, max_abs(m));
    CHECK(max_abs_diff(reconstruct(eig), m) <= 1e-10 * scale * n);

    Matrix gram = multiply(transpose(eig.eigenvectors), eig.eigenvectors);
    CHECK(max_abs_diff(gram, Matrix::identity(n)) <= 1e-10);

    for (std::size_t j = 1; j < eig.eigenvalues.size(); ++j)
      CHECK(eig.eigenvalues[j - 1] >= eig.eigenvalues[j]);
  }
}

TEST_CASE("eigenvector signs are pinned by the first sizable entry", "[eig]") {
  Matrix m = random_symmetric(8, 950);
  EigenDecomposition eig = symmetric_eig(m);
  for (std::size_t j = 0; j < 8; ++j) {
    for (std::size_t i = 0; i < 8; ++i) {
      if (std::abs(eig.eigenvectors(i, j)) > 1e-12) {
        CHECK(eig.eigenvectors(i, j) > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("known small spectra come out exactly", "[eig]") {
  // Path on three nodes: eigenvalues sqrt(2), 0, -sqrt(2).
  Matrix p3(3, 3);
  p3(0, 1) = p3(1, 0) = 1.0;
  p3(1, 2) = p3(2, 1) = 1.0;
  auto ev = symmetric_eigenvalues(p3);
  REQUIRE(ev.size() == 3);
  CHECK_THAT(ev[0], Catch::Matchers::WithinAbs(std::sqrt(2.0), 1e-14));
  CHECK_THAT(ev[1], Catch::Matchers::WithinAbs(0.0, 1e-14));
  CHECK_THAT(ev[2], Catch::Matchers::WithinAbs(-std::sqrt(2.0), 1e-14));
  CHECK_THAT(spectral_norm(p3), Catch::Matchers::WithinAbs(std::sqrt(2.0), 1e-14));

  // Spectral norm picks the negative end when it dominates.
  Matrix neg = scaled(Matrix::identity(2), -3.0);
  neg(0, 0) = 1.0;
  CHECK_THAT(spectral_norm(neg), Catch::Matchers::WithinAbs(3.0, 1e-15));
}

TEST_CASE("values only path agrees with the full decomposition", "[eig]") {
  Matrix m = random_symmetric(12, 970);
  auto full = symmetric_eig(m).eigenvalues;
  auto lean = symmetric_eigenvalues(m);
  REQUIRE(full.size() == lean.size());
  for (std::size_t i = 0; i < full.size(); ++i)
    CHECK_THAT(lean[i], Catch::Matchers::WithinAbs(full[i], 1e-12));
}

TEST_CASE("exactly rank deficient matrices converge", "[eig]") {
  // Rank-2 Gram matrix of 20-dimensional vectors: 18 eigenvalues are exactly
  // zero, which exercises deflation across blocks of zeros.
  const int n = 20;
  auto rng = detail::make_engine(991, {31});
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Matrix u(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 2; ++j) u(i, j) = unit(rng);
  Matrix gram = multiply_abt(u, u);

  EigenDecomposition eig = symmetric_eig(gram);
  CHECK(max_abs_diff(reconstruct(eig), gram) <= 1e-10 * std::max(1.0, max_abs(gram)) * n);
  CHECK(eig.eigenvalues[0] > 0.0);
  CHECK(eig.eigenvalues[1] > 0.0);
  for (int j = 2; j < n; ++j)
    CHECK(std::abs(eig.eigenvalues[j]) <= 1e-12 * std::max(1.0, max_abs(gram)));
}

TEST_CASE("invalid inputs are rejected", "[eig]") {
  Matrix rect(2, 3);
  CHECK_THROWS_AS(symmetric_eig(rect), std::invalid_argument);

  Matrix skew(2, 2);
  skew(0, 1) = 1.0;
  skew(1, 0) = -1.0;
  CHECK_THROWS_AS(symmetric_eig(skew), std::invalid_argument);

  CHECK_THROWS_AS(symmetric_eig(Matrix(0, 0)), std::invalid_argument);
}
