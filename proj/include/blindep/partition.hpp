#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "blindep/matrix.hpp"

namespace blindep {

// Partition of {0, ..., n-1} into classes. The stored assignment is always
// canonical: class ids are assigned by first appearance, so class 0 contains
// node 0, and two partitions are equal iff they group the nodes identically.
class Partition {
 public:
  Partition() = default;

  static Partition from_assignment(const std::vector<int>& labels) {
    if (labels.empty()) throw std::invalid_argument("Partition: node count must be positive");
    Partition p;
    p.assignment_.resize(labels.size(), -1);
    std::vector<int> remap;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const int raw = labels[i];
      if (raw < 0) throw std::invalid_argument("Partition: negative class label");
      int canon = -1;
      for (std::size_t r = 0; r < remap.size(); ++r)
        if (remap[r] == raw) {
          canon = static_cast<int>(r);
          break;
        }
      if (canon < 0) {
        canon = static_cast<int>(remap.size());
        remap.push_back(raw);
      }
      p.assignment_[i] = canon;
    }
    p.rebuild_sizes();
    return p;
  }

  static Partition single_class(int n) {
    return from_assignment(std::vector<int>(static_cast<std::size_t>(n), 0));
  }

  static Partition singletons(int n) {
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) labels[i] = i;
    return from_assignment(labels);
  }

  const std::vector<int>& assignment() const { return assignment_; }
  int size() const { return static_cast<int>(assignment_.size()); }
  int class_count() const { return static_cast<int>(class_sizes_.size()); }
  const std::vector<int>& class_sizes() const { return class_sizes_; }
  int class_of(int node) const { return assignment_[node]; }

  std::vector<std::vector<int>> classes() const {
    std::vector<std::vector<int>> out(class_sizes_.size());
    for (std::size_t c = 0; c < out.size(); ++c) out[c].reserve(class_sizes_[c]);
    for (std::size_t i = 0; i < assignment_.size(); ++i)
      out[assignment_[i]].push_back(static_cast<int>(i));
    return out;
  }

  bool operator==(const Partition& other) const { return assignment_ == other.assignment_; }

 private:
  void rebuild_sizes() {
    int k = 0;
    for (int c : assignment_) k = std::max(k, c + 1);
    class_sizes_.assign(k, 0);
    for (int c : assignment_) ++class_sizes_[c];
  }

  std::vector<int> assignment_;
  std::vector<int> class_sizes_;
};

// n x k 0/1 matrix with one column per class.
inline Matrix indicator_matrix(const Partition& p) {
  Matrix h(static_cast<std::size_t>(p.size()), static_cast<std::size_t>(p.class_count()));
  for (int i = 0; i < p.size(); ++i) h(i, p.class_of(i)) = 1.0;
  return h;
}

// Indicator with columns scaled to unit length, so its transpose is a left
// inverse and the columns form an orthonormal basis of the class span.
inline Matrix normalized_indicator(const Partition& p) {
  Matrix h = indicator_matrix(p);
  for (int c = 0; c < p.class_count(); ++c) {
    const double inv = 1.0 / std::sqrt(static_cast<double>(p.class_sizes()[c]));
    for (int i = 0; i < p.size(); ++i) h(i, c) *= inv;
  }
  return h;
}

// True when every class of fine lies inside a single class of coarse.
inline bool refines(const Partition& fine, const Partition& coarse) {
  if (fine.size() != coarse.size()) throw std::invalid_argument("refines: size mismatch");
  std::vector<int> image(fine.class_count(), -1);
  for (int i = 0; i < fine.size(); ++i) {
    const int fc = fine.class_of(i);
    const int cc = coarse.class_of(i);
    if (image[fc] == -1)
      image[fc] = cc;
    else if (image[fc] != cc)
      return false;
  }
  return true;
}

}  // namespace blindep
