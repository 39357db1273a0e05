#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "blindep/graph.hpp"
#include "blindep/matrix.hpp"
#include "blindep/partition.hpp"
#include "blindep/quotient.hpp"
#include "blindep/refine.hpp"
#include "blindep/seeds.hpp"

namespace blindep {

// Polynomial graph filter sum_t coefficients[t] * A^t.
struct FilterSpec {
  std::vector<double> coefficients;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }

  void validate() const {
    if (coefficients.empty()) throw std::invalid_argument("FilterSpec: no coefficients");
    bool any = false;
    for (double c : coefficients) {
      if (!std::isfinite(c)) throw std::invalid_argument("FilterSpec: coefficient not finite");
      if (c != 0.0) any = true;
    }
    if (!any) throw std::invalid_argument("FilterSpec: all coefficients are zero");
  }
};

inline FilterSpec identity_filter() { return FilterSpec{{0.0, 1.0}}; }

// Evaluates f(A) * x by Horner's rule, so a degree-d filter costs d products
// with A and never forms a matrix power.
inline Matrix apply_filter(const Matrix& a, const FilterSpec& f, const Matrix& x) {
  f.validate();
  if (a.rows() != a.cols() || a.cols() != x.rows())
    throw std::invalid_argument("apply_filter: dimension mismatch");
  const int d = f.degree();
  Matrix r = scaled(x, f.coefficients[d]);
  for (int t = d - 1; t >= 0; --t) {
    r = multiply(a, r);
    if (f.coefficients[t] != 0.0)
      for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) += f.coefficients[t] * x(i, j);
  }
  return r;
}

inline Matrix apply_filter(const Graph& g, const FilterSpec& f, const Matrix& x) {
  return apply_filter(g.adjacency(), f, x);
}

inline Matrix filter_matrix(const Matrix& a, const FilterSpec& f) {
  return apply_filter(a, f, Matrix::identity(a.rows()));
}

// Scalar filter response, for mapping quotient eigenvalues through f.
inline double filter_value(const FilterSpec& f, double lambda) {
  double r = 0.0;
  for (int t = f.degree(); t >= 0; --t) r = r * lambda + f.coefficients[t];
  return r;
}

// Observation model: each sample is a filtered signal that is constant on
// the classes of a planted equitable partition, mixed with white noise.
// alpha = 1 means pure structure, alpha = 0 pure noise.
struct SignalModel {
  Graph graph;
  Partition planted;
  double alpha = 1.0;
  FilterSpec filter = identity_filter();

  void validate() const {
    filter.validate();
    if (planted.size() != graph.node_count())
      throw std::invalid_argument("SignalModel: partition size does not match the graph");
    if (!(alpha >= 0.0 && alpha <= 1.0))
      throw std::invalid_argument("SignalModel: alpha must lie in [0, 1]");
    if (!is_equitable(graph, planted))
      throw std::invalid_argument("SignalModel: planted partition is not equitable");
  }
};

struct SampleSet {
  Matrix samples;  // n x s, one observation per column
  std::uint64_t seed = 0;
  double alpha = 1.0;
  std::vector<double> filter_coefficients;

  int node_count() const { return static_cast<int>(samples.rows()); }
  int sample_count() const { return static_cast<int>(samples.cols()); }
};

// Draws s independent observations. Each sample uses its own engine derived
// from (seed, sample index), so any prefix of a sample set is reproducible
// regardless of how the loop is scheduled.
inline SampleSet generate_samples(const SignalModel& model, int s, std::uint64_t seed) {
  model.validate();
  if (s <= 0) throw std::invalid_argument("generate_samples: sample count must be positive");
  const int n = model.graph.node_count();
  const int k = model.planted.class_count();
  const Matrix structure =
      scaled(apply_filter(model.graph, model.filter, normalized_indicator(model.planted)),
             model.alpha);
  const double noise_scale = 1.0 - model.alpha;

  SampleSet out;
  out.samples = Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(s));
  out.seed = seed;
  out.alpha = model.alpha;
  out.filter_coefficients = model.filter.coefficients;

  std::vector<double> x(static_cast<std::size_t>(k));
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < s; ++i) {
    auto engine = detail::make_engine(seed, {detail::kStreamSample, static_cast<std::uint64_t>(i)});
    for (int c = 0; c < k; ++c) x[c] = gauss(engine);
    for (int v = 0; v < n; ++v) {
      const double* row = structure.row(v);
      double acc = 0.0;
      for (int c = 0; c < k; ++c) acc += row[c] * x[c];
      out.samples(v, i) = acc + noise_scale * gauss(engine);
    }
  }
  return out;
}

// Uncentered second moment (1/s) * Y * Y^T. The model has zero mean, so no
// mean is subtracted.
inline Matrix sample_covariance(const Matrix& samples) {
  const std::size_t n = samples.rows();
  const std::size_t s = samples.cols();
  if (s == 0) throw std::invalid_argument("sample_covariance: empty sample set");
  Matrix cov(n, n);
  const double inv = 1.0 / static_cast<double>(s);
  for (std::size_t i = 0; i < n; ++i) {
    const double* yi = samples.row(i);
    for (std::size_t j = i; j < n; ++j) {
      const double* yj = samples.row(j);
      double acc = 0.0;
      for (std::size_t t = 0; t < s; ++t) acc += yi[t] * yj[t];
      cov(i, j) = cov(j, i) = acc * inv;
    }
  }
  return cov;
}

inline Matrix sample_covariance(const SampleSet& set) { return sample_covariance(set.samples); }

// Population covariance of the model:
//   alpha^2 f(A) Hn Hn^T f(A)^T + (1-alpha)^2 I
// with Hn the normalized indicator.
inline Matrix exact_covariance(const SignalModel& model) {
  model.validate();
  const Matrix m = apply_filter(model.graph, model.filter, normalized_indicator(model.planted));
  Matrix cov = multiply_abt(m, m);
  const double a2 = model.alpha * model.alpha;
  const double z2 = (1.0 - model.alpha) * (1.0 - model.alpha);
  for (double& v : cov.data()) v *= a2;
  for (std::size_t i = 0; i < cov.rows(); ++i) cov(i, i) += z2;
  return cov;
}

// Tolerance for refining real-valued matrices whose entries carry floating
// point error from matrix products.
inline double float_refine_tol(const Matrix& m) { return 1e-9 * std::max(1.0, max_abs(m)); }

// A filter is compatible with the model when neither f(A) nor f(A)^2 blurs
// the planted partition: both must refine, from a single starting class, to
// exactly the planted classes. Squaring matters because covariance-based
// recovery effectively observes the filter twice.
inline bool filter_compatible(const SignalModel& model) {
  model.validate();
  const Matrix fa = filter_matrix(model.graph.adjacency(), model.filter);
  if (!(matrix_cep(fa, float_refine_tol(fa)) == model.planted)) return false;
  const Matrix fa2 = multiply(fa, fa);
  return matrix_cep(fa2, float_refine_tol(fa2)) == model.planted;
}

}  // namespace blindep
