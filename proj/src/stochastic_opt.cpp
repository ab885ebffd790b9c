#include "convopt/stochastic_opt.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "convopt/errors.hpp"
#include "convopt/random.hpp"

namespace convopt {

namespace {

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double fullObjective(const RegularizedLoss& c, const DenseVector& w) {
  return c.dataValue(w) + c.regularizerValue(w);
}

int checkedExampleCount(const RegularizedLoss& c) {
  int n = c.data().numExamples();
  if (n < 1) throw ConfigError("stochastic solvers need a nonempty dataset");
  return n;
}

// One epoch of mini-batches over a fresh shuffle. Batch indices are sorted
// so the accumulation order matches the batch-gradient path of eval; with
// miniBatchSize == n an epoch is exactly one full-gradient step.
template <typename Fn>
void forEachBatch(Rng& rng, int n, int batchSize, Fn&& fn) {
  std::vector<int> perm = shuffledIndices(rng, n);
  std::vector<int> batch;
  for (int start = 0; start < n; start += batchSize) {
    int end = std::min(n, start + batchSize);
    batch.assign(perm.begin() + start, perm.begin() + end);
    std::sort(batch.begin(), batch.end());
    fn(batch);
  }
}

// Data subgradient of the batch plus the batch's share (b/n) of the
// regularizer gradient, all in the summed convention.
void batchGradient(const RegularizedLoss& c, const DenseVector& w,
                   const std::vector<int>& batch, int n, DenseVector& ghat) {
  c.dataSubsetGradient(w, batch, ghat);
  c.addRegularizerGradient(w, static_cast<double>(batch.size()) / n, ghat);
}

SolverResult finishEpochRun(const RegularizedLoss& c, DenseVector w, long long updates,
                            std::vector<TracePoint> trace) {
  SolverResult r;
  r.f = fullObjective(c, w);
  r.w = std::move(w);
  r.evaluations = static_cast<int>(updates);
  r.terminated = Termination::BudgetExhausted;  // epoch budget ran to the end
  r.trace = std::move(trace);
  return r;
}

enum class StepRule { Constant, Decaying, Adagrad };

SolverResult runSgd(const RegularizedLoss& c, const DenseVector& x0,
                    const StochasticConfig& cfg, StepRule rule) {
  validate(cfg);
  int n = checkedExampleCount(c);
  int b = std::min(cfg.miniBatchSize, n);
  DenseVector w = x0;
  DenseVector ghat;
  DenseVector gsq;  // AdaGrad's per-coordinate accumulator
  if (rule == StepRule::Adagrad) gsq.assign(x0.size(), 0.0);
  Rng rng(cfg.seed);
  long long t = 0;
  std::vector<TracePoint> trace;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    forEachBatch(rng, n, b, [&](const std::vector<int>& batch) {
      batchGradient(c, w, batch, n, ghat);
      switch (rule) {
        case StepRule::Constant:
          multiplyAccumulate(w, cfg.stepSize, ghat);
          break;
        case StepRule::Decaying:
          multiplyAccumulate(w, cfg.stepSize / (1.0 + cfg.decayRate * static_cast<double>(t)),
                             ghat);
          break;
        case StepRule::Adagrad:
          for (std::size_t j = 0; j < w.size(); ++j) {
            gsq[j] += ghat[j] * ghat[j];
            w[j] -= cfg.stepSize * ghat[j] / (cfg.adagradEps + std::sqrt(gsq[j]));
          }
          break;
      }
      ++t;
    });
    trace.push_back({static_cast<int>(t), fullObjective(c, w)});
  }
  return finishEpochRun(c, std::move(w), t, std::move(trace));
}

}  // namespace

void validate(const StochasticConfig& cfg) {
  if (!(cfg.stepSize > 0.0)) throw ConfigError("stepSize must be > 0");
  if (!(cfg.decayRate > 0.0)) throw ConfigError("decayRate must be > 0");
  if (cfg.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (cfg.miniBatchSize < 1) throw ConfigError("miniBatchSize must be >= 1");
  if (!(cfg.adagradEps > 0.0)) throw ConfigError("adagradEps must be > 0");
  if (!(cfg.rdaGamma > 0.0)) throw ConfigError("rdaGamma must be > 0");
}

SolverResult sgd(const RegularizedLoss& c, const DenseVector& x0,
                 const StochasticConfig& cfg) {
  return runSgd(c, x0, cfg, StepRule::Constant);
}

SolverResult sgdDecayingLearningRate(const RegularizedLoss& c, const DenseVector& x0,
                                     const StochasticConfig& cfg) {
  return runSgd(c, x0, cfg, StepRule::Decaying);
}

SolverResult sgdAdagrad(const RegularizedLoss& c, const DenseVector& x0,
                        const StochasticConfig& cfg) {
  return runSgd(c, x0, cfg, StepRule::Adagrad);
}

SolverResult sgdStochasticAverageGradient(const RegularizedLoss& c, const DenseVector& x0,
                                          const StochasticConfig& cfg,
                                          const SagInspector& inspect) {
  validate(cfg);
  if (c.regularizer() != Regularizer::L2)
    throw UnsupportedOperation("sgdStochasticAverageGradient supports only L2 regularization");
  int n = checkedExampleCount(c);
  DenseVector w = x0;
  std::vector<double> scalars(static_cast<std::size_t>(n), 0.0);  // d_i of the last visit
  DenseVector gradientSum(x0.size(), 0.0);                        // sum_i d_i x_i
  DenseVector step;
  Rng rng(cfg.seed);
  long long t = 0;
  std::vector<TracePoint> trace;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<int> perm = shuffledIndices(rng, n);
    for (int i : perm) {
      const SparseExample& x = c.data().examples[static_cast<std::size_t>(i)];
      double dNew = c.exampleGradientScale(w, i);
      double delta = dNew - scalars[static_cast<std::size_t>(i)];
      if (delta != 0.0) addScaled(gradientSum, delta, x);
      scalars[static_cast<std::size_t>(i)] = dNew;
      // w -= eta/n * (gradientSum + lambda w): the average of the n
      // remembered gradients plus the matching share of the L2 term, so the
      // stationary point is the minimizer of the summed objective.
      step = gradientSum;
      c.addRegularizerGradient(w, 1.0, step);
      multiplyAccumulate(w, cfg.stepSize / n, step);
      ++t;
    }
    if (inspect) inspect(epoch, w, scalars, gradientSum);
    trace.push_back({static_cast<int>(t), fullObjective(c, w)});
  }
  return finishEpochRun(c, std::move(w), t, std::move(trace));
}

namespace {

SolverResult runRda(const RegularizedLoss& c, const DenseVector& x0,
                    const StochasticConfig& cfg, bool adagradScaling) {
  validate(cfg);
  if (c.regularizer() != Regularizer::L1)
    throw UnsupportedOperation("regularized dual averaging requires an L1 regularizer");
  int n = checkedExampleCount(c);
  int b = std::min(cfg.miniBatchSize, n);
  // The averaged gradients live on the per-example scale, so the threshold
  // is lambda/n; the closed-form iterate below then minimizes the same
  // objective as the summed convention.
  double lambdaBar = c.lambda() / n;
  DenseVector w = x0;
  DenseVector ghat;
  DenseVector gbar(x0.size(), 0.0);
  DenseVector gsq;
  if (adagradScaling) gsq.assign(x0.size(), 0.0);
  Rng rng(cfg.seed);
  long long t = 0;
  std::vector<TracePoint> trace;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    forEachBatch(rng, n, b, [&](const std::vector<int>& batch) {
      c.dataSubsetGradient(w, batch, ghat);  // smooth part only
      scale(ghat, 1.0 / static_cast<double>(batch.size()));
      ++t;
      double tD = static_cast<double>(t);
      for (std::size_t j = 0; j < w.size(); ++j) {
        gbar[j] += (ghat[j] - gbar[j]) / tD;
        double k;
        if (adagradScaling) {
          gsq[j] += ghat[j] * ghat[j];
          k = tD / (cfg.adagradEps + std::sqrt(gsq[j]));
        } else {
          k = std::sqrt(tD) / cfg.rdaGamma;
        }
        // Soft threshold on the running average: untouched coordinates and
        // small averages land on exactly 0.
        w[j] = std::fabs(gbar[j]) <= lambdaBar
                   ? 0.0
                   : -k * (gbar[j] - lambdaBar * sgn(gbar[j]));
      }
    });
    trace.push_back({static_cast<int>(t), fullObjective(c, w)});
  }
  return finishEpochRun(c, std::move(w), t, std::move(trace));
}

}  // namespace

SolverResult sgdRegularizedDualAveraging(const RegularizedLoss& c, const DenseVector& x0,
                                         const StochasticConfig& cfg) {
  return runRda(c, x0, cfg, false);
}

SolverResult sgdRegularizedDualAveragingAdagrad(const RegularizedLoss& c,
                                                const DenseVector& x0,
                                                const StochasticConfig& cfg) {
  return runRda(c, x0, cfg, true);
}

}  // namespace convopt
