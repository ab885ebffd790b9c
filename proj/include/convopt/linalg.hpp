#ifndef CONVOPT_LINALG_HPP
#define CONVOPT_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "convopt/errors.hpp"

namespace convopt {

// Weights, gradients and labels all live in plain dense vectors.
using DenseVector = std::vector<double>;

// One (featureIndex, value) pair. Indices are 0-based internally; 1-based
// file formats are shifted at the I/O boundary.
struct SparseEntry {
  int index;
  double value;
};

// A data instance: entries sorted by strictly increasing index, no explicit
// zeros stored. The label is filled in when the source format carries one.
struct SparseExample {
  std::vector<SparseEntry> entries;
  std::optional<double> label;
};

inline double dot(const DenseVector& a, const DenseVector& b) {
  if (a.size() != b.size())
    throw DimensionMismatch("dot: lengths differ (" + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + ")");
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

inline double dot(const DenseVector& a, const SparseExample& x) {
  double s = 0.0;
  for (const SparseEntry& e : x.entries) {
    if (e.index < 0 || static_cast<std::size_t>(e.index) >= a.size())
      throw DimensionMismatch("dot: sparse index " + std::to_string(e.index) +
                              " out of range for vector of length " + std::to_string(a.size()));
    s += a[e.index] * e.value;
  }
  return s;
}

inline double norm(const DenseVector& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

inline double infinityNorm(const DenseVector& a) {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::fabs(v));
  return s;
}

inline double l1Norm(const DenseVector& a) {
  double s = 0.0;
  for (double v : a) s += std::fabs(v);
  return s;
}

// x <- x - alpha * g, the gradient-descent primitive.
inline void multiplyAccumulate(DenseVector& x, double alpha, const DenseVector& g) {
  if (x.size() != g.size())
    throw DimensionMismatch("multiplyAccumulate: lengths differ (" + std::to_string(x.size()) +
                            " vs " + std::to_string(g.size()) + ")");
  for (std::size_t j = 0; j < x.size(); ++j) x[j] -= alpha * g[j];
}

// x <- x + c * e over the nonzero entries of e.
inline void addScaled(DenseVector& x, double c, const SparseExample& e) {
  for (const SparseEntry& en : e.entries) {
    if (en.index < 0 || static_cast<std::size_t>(en.index) >= x.size())
      throw DimensionMismatch("addScaled: sparse index " + std::to_string(en.index) +
                              " out of range for vector of length " + std::to_string(x.size()));
    x[en.index] += c * en.value;
  }
}

inline void scale(DenseVector& x, double c) {
  for (double& v : x) v *= c;
}

inline double squaredNorm(const SparseExample& e) {
  double s = 0.0;
  for (const SparseEntry& en : e.entries) s += en.value * en.value;
  return s;
}

}  // namespace convopt

#endif  // CONVOPT_LINALG_HPP
