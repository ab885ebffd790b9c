#ifndef CONVOPT_TESTS_SUPPORT_TEST_UTIL_HPP
#define CONVOPT_TESTS_SUPPORT_TEST_UTIL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "convopt/dataio.hpp"
#include "convopt/linalg.hpp"
#include "convopt/losses.hpp"
#include "convopt/random.hpp"

namespace convopt::testsupport {

// ---- dataset construction ----

inline SparseExample example(std::initializer_list<std::pair<int, double>> entries,
                             std::optional<double> label = std::nullopt) {
  SparseExample x;
  for (auto& [index, value] : entries) x.entries.push_back({index, value});
  x.label = label;
  return x;
}

class DatasetBuilder {
 public:
  explicit DatasetBuilder(int numFeatures) { d_.numFeatures = numFeatures; }

  DatasetBuilder& add(std::initializer_list<std::pair<int, double>> entries, double label) {
    d_.examples.push_back(example(entries, label));
    d_.labels.push_back(label);
    return *this;
  }

  Dataset build() { return std::move(d_); }

 private:
  Dataset d_;
};

inline double gaussian(Rng& rng) {
  // Box-Muller; u strictly inside (0,1) so the log stays finite.
  double u = 0.0;
  while (u == 0.0) u = rng.nextDouble();
  double v = rng.nextDouble();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * 3.14159265358979323846 * v);
}

inline DenseVector randomVector(int m, double scale, Rng& rng) {
  DenseVector w(static_cast<std::size_t>(m));
  for (double& v : w) v = scale * gaussian(rng);
  return w;
}

// Two Gaussian blobs centered at +-center (all coordinates), labels +-1.
// With center comfortably above spread the classes are linearly separable.
inline Dataset gaussianBlobs(int n, int m, double center, double spread, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  d.numFeatures = m;
  for (int i = 0; i < n; ++i) {
    double y = i % 2 == 0 ? 1.0 : -1.0;
    SparseExample x;
    for (int j = 0; j < m; ++j)
      x.entries.push_back({j, y * center + spread * gaussian(rng)});
    x.label = y;
    d.examples.push_back(std::move(x));
    d.labels.push_back(y);
  }
  return d;
}

// Blobs where only the first `informative` coordinates carry the class
// signal; the rest are pure noise, so L1 paths have something to prune.
inline Dataset gaussianBlobsPartial(int n, int m, int informative, double center,
                                    double spread, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  d.numFeatures = m;
  for (int i = 0; i < n; ++i) {
    double y = i % 2 == 0 ? 1.0 : -1.0;
    SparseExample x;
    for (int j = 0; j < m; ++j) {
      double mean = j < informative ? y * center : 0.0;
      x.entries.push_back({j, mean + spread * gaussian(rng)});
    }
    x.label = y;
    d.examples.push_back(std::move(x));
    d.labels.push_back(y);
  }
  return d;
}

// Dense random features, random +-1 labels; hard to fit, good for probing
// gradients away from any structure.
inline Dataset randomSigns(int n, int m, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  d.numFeatures = m;
  for (int i = 0; i < n; ++i) {
    double y = rng.next(2) == 0 ? -1.0 : 1.0;
    SparseExample x;
    for (int j = 0; j < m; ++j) x.entries.push_back({j, gaussian(rng)});
    x.label = y;
    d.examples.push_back(std::move(x));
    d.labels.push_back(y);
  }
  return d;
}

// y = wTrue . x + noise, for the regression losses.
inline Dataset randomRegression(int n, int m, double noise, std::uint64_t seed) {
  Rng rng(seed);
  DenseVector wTrue = randomVector(m, 1.0, rng);
  Dataset d;
  d.numFeatures = m;
  for (int i = 0; i < n; ++i) {
    SparseExample x;
    for (int j = 0; j < m; ++j) x.entries.push_back({j, gaussian(rng)});
    double y = dot(wTrue, x) + noise * gaussian(rng);
    x.label = y;
    d.examples.push_back(std::move(x));
    d.labels.push_back(y);
  }
  return d;
}

// ---- comparison helpers ----

inline double relDiff(double a, double b) {
  double denom = std::max(std::fabs(a), std::fabs(b));
  if (denom == 0.0) return 0.0;
  return std::fabs(a - b) / denom;
}

// Relative with an absolute floor of 1: right scale for gradients that mix
// O(1) and near-zero components.
inline bool closeWithFloor(double got, double want, double tol) {
  return std::fabs(got - want) <= tol * std::max(1.0, std::fabs(want));
}

// ---- oracles (independent of the gradient code under test) ----

// Central differences of the objective value only.
inline DenseVector finiteDifferenceGradient(const DifferentiableFunction& f,
                                            const DenseVector& w, double h = 1e-6) {
  DenseVector fd(w.size());
  DenseVector probe = w;
  DenseVector gScratch;
  for (std::size_t j = 0; j < w.size(); ++j) {
    double fPlus = 0.0, fMinus = 0.0;
    probe[j] = w[j] + h;
    f.eval(probe, fPlus, gScratch);
    probe[j] = w[j] - h;
    f.eval(probe, fMinus, gScratch);
    probe[j] = w[j];
    fd[j] = (fPlus - fMinus) / (2.0 * h);
  }
  return fd;
}

// Central differences of the gradient along v: approximates H(w) v.
inline DenseVector finiteDifferenceHvp(const DifferentiableFunction& f, const DenseVector& w,
                                       const DenseVector& v, double h = 1e-5) {
  DenseVector probe = w;
  for (std::size_t j = 0; j < w.size(); ++j) probe[j] += h * v[j];
  double fScratch = 0.0;
  DenseVector gPlus, gMinus;
  f.eval(probe, fScratch, gPlus);
  for (std::size_t j = 0; j < w.size(); ++j) probe[j] = w[j] - h * v[j];
  f.eval(probe, fScratch, gMinus);
  DenseVector hv(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) hv[j] = (gPlus[j] - gMinus[j]) / (2.0 * h);
  return hv;
}

// Upper bound on the Lipschitz constant of the smooth data gradient (plus
// the L2 term when present). Kink-free kinds only.
inline double smoothnessBound(const RegularizedLoss& loss) {
  double factor = 0.0;
  switch (loss.kind()) {
    case LossKind::LeastSquares: factor = 1.0; break;
    case LossKind::Logistic: factor = 0.25; break;
    case LossKind::Probit: factor = 1.0; break;
    case LossKind::SmoothSVM: factor = 2.0; break;
    case LossKind::SmoothSVR: factor = 2.0; break;
    case LossKind::HuberSVM: factor = 0.5 / loss.options().huberThreshold; break;
    default: throw std::logic_error("smoothnessBound: nonsmooth loss");
  }
  double sum = 0.0;
  for (const SparseExample& x : loss.data().examples) sum += squaredNorm(x);
  double L = factor * sum;
  if (loss.regularizer() == Regularizer::L2) L += loss.lambda();
  return L;
}

// Proximal gradient (ISTA) for smoothSum + lambda ||w||_1 from w = 0 with
// the fixed safe step 1 / smoothnessBound. The reference optimum for the
// L1 solvers.
inline DenseVector istaMinimize(const RegularizedLoss& loss, int iterations) {
  if (loss.regularizer() != Regularizer::L1)
    throw std::logic_error("istaMinimize expects an L1 loss");
  double step = 1.0 / smoothnessBound(loss);
  double threshold = step * loss.lambda();
  DenseVector w(static_cast<std::size_t>(loss.dimension()), 0.0);
  DenseVector g;
  for (int k = 0; k < iterations; ++k) {
    loss.dataGradient(w, g);
    for (std::size_t j = 0; j < w.size(); ++j) {
      double u = w[j] - step * g[j];
      w[j] = u > threshold ? u - threshold : (u < -threshold ? u + threshold : 0.0);
    }
  }
  return w;
}

inline double objectiveValue(const RegularizedLoss& loss, const DenseVector& w) {
  return loss.dataValue(w) + loss.regularizerValue(w);
}

// Exhaustive 1-D minimization: coarse grid then golden-section refinement.
template <typename F>
double gridSearchMin(F&& f, double lo, double hi, int steps) {
  double bestX = lo, bestF = f(lo);
  for (int i = 1; i <= steps; ++i) {
    double x = lo + (hi - lo) * i / steps;
    double v = f(x);
    if (v < bestF) {
      bestF = v;
      bestX = x;
    }
  }
  double a = std::max(lo, bestX - (hi - lo) / steps);
  double b = std::min(hi, bestX + (hi - lo) / steps);
  const double phi = 0.6180339887498949;
  for (int it = 0; it < 200; ++it) {
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    if (f(x1) < f(x2))
      b = x2;
    else
      a = x1;
  }
  return 0.5 * (a + b);
}

// ---- temp files ----

class TempFile {
 public:
  TempFile(const std::string& stem, const std::string& contents) {
    path_ = (std::filesystem::temp_directory_path() /
             ("convopt_test_" + stem + "_" + std::to_string(counter()++)))
                .string();
    std::ofstream out(path_);
    out << contents;
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const { return path_; }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string path_;
};

}  // namespace convopt::testsupport

#endif  // CONVOPT_TESTS_SUPPORT_TEST_UTIL_HPP
