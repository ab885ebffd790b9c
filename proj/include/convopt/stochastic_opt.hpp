#ifndef CONVOPT_STOCHASTIC_OPT_HPP
#define CONVOPT_STOCHASTIC_OPT_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "convopt/losses.hpp"
#include "convopt/solver_result.hpp"

namespace convopt {

// Knobs for the epoch-driven solvers. Each epoch visits every example once
// in a freshly shuffled order drawn from the seeded generator, so a fixed
// seed reproduces runs bit for bit.
struct StochasticConfig {
  double stepSize = 1e-5;     // eta
  double decayRate = 1e-3;    // sgdDecayingLearningRate: eta_t = eta / (1 + decayRate * t)
  int epochs = 50;
  int miniBatchSize = 1;      // clamped to n; indices within a batch are sorted
  std::uint64_t seed = 1;
  double adagradEps = 1e-8;   // delta added before dividing by accumulated curvature
  double rdaGamma = 1.0;      // RDA step-scale gamma
};

// Throws ConfigError on out-of-range fields.
void validate(const StochasticConfig& cfg);

// Mini-batch subgradient descent. The batch gradient is the sum of the
// per-example data subgradients plus (b/n) of the regularizer gradient, so
// miniBatchSize == n reproduces a fixed-step full-gradient step exactly.
// The result's trace holds the full objective once per epoch, tagged with
// the cumulative mini-batch gradient count.
SolverResult sgd(const RegularizedLoss& c, const DenseVector& x0,
                 const StochasticConfig& cfg);

// Same updates with eta_t = eta / (1 + decayRate * t), t counting all
// mini-batch steps from 0 across epochs.
SolverResult sgdDecayingLearningRate(const RegularizedLoss& c, const DenseVector& x0,
                                     const StochasticConfig& cfg);

// AdaGrad (Duchi, Hazan & Singer 2011): per-coordinate accumulated squared
// gradients G_j, update w_j -= eta * ghat_j / (delta + sqrt(G_j)).
SolverResult sgdAdagrad(const RegularizedLoss& c, const DenseVector& x0,
                        const StochasticConfig& cfg);

// Called after each epoch with the per-example gradient scalars and their
// running weighted sum; lets tests watch the solver's bookkeeping.
using SagInspector =
    std::function<void(int epoch, const DenseVector& w, const std::vector<double>& scalars,
                       const DenseVector& gradientSum)>;

// Stochastic average gradient (Le Roux, Schmidt & Bach 2012). Each example's
// last gradient is remembered as a scalar d_i (gradient = d_i x_i); the step
// uses the average of all remembered gradients plus the L2 term. L1 is not
// supported.
SolverResult sgdStochasticAverageGradient(const RegularizedLoss& c, const DenseVector& x0,
                                          const StochasticConfig& cfg,
                                          const SagInspector& inspect = {});

// Regularized dual averaging (Xiao 2010) for L1 losses: averages the smooth
// mini-batch gradients and re-solves the proximal step in closed form, so
// coordinates under the threshold are exactly 0.
SolverResult sgdRegularizedDualAveraging(const RegularizedLoss& c, const DenseVector& x0,
                                         const StochasticConfig& cfg);

// RDA with AdaGrad's per-coordinate scaling H_j = delta + sqrt(sum ghat_j^2).
SolverResult sgdRegularizedDualAveragingAdagrad(const RegularizedLoss& c,
                                                const DenseVector& x0,
                                                const StochasticConfig& cfg);

}  // namespace convopt

#endif  // CONVOPT_STOCHASTIC_OPT_HPP
