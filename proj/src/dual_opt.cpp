#include "convopt/dual_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "convopt/errors.hpp"
#include "convopt/random.hpp"

namespace convopt {

namespace {

double primalObjective(const Dataset& data, SvmKind kind, double C, const DenseVector& w) {
  double lossSum = 0.0;
  for (int i = 0; i < data.numExamples(); ++i) {
    double margin = data.labels[static_cast<std::size_t>(i)] *
                    dot(w, data.examples[static_cast<std::size_t>(i)]);
    double h = std::max(0.0, 1.0 - margin);
    lossSum += kind == SvmKind::L1Svm ? h : h * h;
  }
  double wNorm = 0.0;
  for (double v : w) wNorm += v * v;
  return C * lossSum + 0.5 * wNorm;
}

}  // namespace

SolverResult svcDual(const Dataset& data, SvmKind kind, double C, double tol, int maxEpochs,
                     std::uint64_t seed, const DualInspector& inspect) {
  if (!(C > 0.0)) throw ConfigError("C must be > 0");
  if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
  if (maxEpochs < 1) throw ConfigError("maxEpochs must be >= 1");
  int n = data.numExamples();
  if (n < 1) throw ConfigError("svcDual needs a nonempty dataset");
  if (data.labels.size() != data.examples.size())
    throw DimensionMismatch("dataset example and label counts differ");
  for (double y : data.labels)
    if (y != 1.0 && y != -1.0)
      throw ConfigError("svcDual requires labels in {-1,+1}, got " + formatDouble(y));

  double diag = kind == SvmKind::L1Svm ? 0.0 : 1.0 / (2.0 * C);
  double upper = kind == SvmKind::L1Svm ? C : std::numeric_limits<double>::infinity();

  // Qbar_ii = x_i'x_i + D_ii, fixed for the whole run.
  std::vector<double> qDiag(static_cast<std::size_t>(n));
  std::vector<bool> zeroExample(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    double xx = squaredNorm(data.examples[static_cast<std::size_t>(i)]);
    zeroExample[static_cast<std::size_t>(i)] = xx == 0.0;
    qDiag[static_cast<std::size_t>(i)] = xx + diag;
  }

  std::vector<double> alpha(static_cast<std::size_t>(n), 0.0);
  DenseVector w(static_cast<std::size_t>(data.numFeatures), 0.0);
  Rng rng(seed);
  std::vector<TracePoint> trace;
  Termination term = Termination::BudgetExhausted;
  int epochsRun = 0;
  for (int epoch = 0; epoch < maxEpochs; ++epoch) {
    std::vector<int> perm = shuffledIndices(rng, n);
    double maxViolation = 0.0;
    for (int i : perm) {
      std::size_t ii = static_cast<std::size_t>(i);
      if (zeroExample[ii]) continue;
      const SparseExample& x = data.examples[ii];
      double y = data.labels[ii];
      double grad = y * dot(w, x) - 1.0 + diag * alpha[ii];
      // Projected gradient: zero when the box constraint is active and the
      // plain gradient points outward.
      double pg = grad;
      if (alpha[ii] == 0.0 && grad > 0.0)
        pg = 0.0;
      else if (alpha[ii] == upper && grad < 0.0)
        pg = 0.0;
      maxViolation = std::max(maxViolation, std::fabs(pg));
      if (pg != 0.0) {
        double next = std::min(std::max(alpha[ii] - grad / qDiag[ii], 0.0), upper);
        double delta = next - alpha[ii];
        if (delta != 0.0) addScaled(w, delta * y, x);
        alpha[ii] = next;
      }
    }
    ++epochsRun;
    if (inspect) inspect(epoch, alpha, w);
    trace.push_back({epochsRun, primalObjective(data, kind, C, w)});
    if (maxViolation < tol) {
      term = Termination::Converged;
      break;
    }
  }
  SolverResult r;
  r.f = primalObjective(data, kind, C, w);
  r.w = std::move(w);
  r.evaluations = epochsRun;
  r.terminated = term;
  r.trace = std::move(trace);
  return r;
}

}  // namespace convopt
