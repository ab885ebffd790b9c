#ifndef CONVOPT_BATCH_OPT_HPP
#define CONVOPT_BATCH_OPT_HPP

#include "convopt/losses.hpp"
#include "convopt/solver_result.hpp"

namespace convopt {

// Shared knobs for the batch solvers. Every function evaluation, including
// rejected line-search trials, counts against maxEval; Hessian-vector
// products inside tron do not.
struct SolverConfig {
  double alpha = 1.0;    // step size (gd), or the line-search seed
  double gamma = 1e-4;   // Armijo sufficient-decrease constant, in (0, 1)
  int maxEval = 250;     // function-evaluation budget, >= 1
  double tol = 1e-3;     // stop once the (pseudo-)gradient 2-norm is below this
  int memory = 100;      // history pairs kept by the limited-memory solvers
  int verbosity = 0;     // >= 2 prints per-iteration progress to stderr
};

// Throws ConfigError on out-of-range fields.
void validate(const SolverConfig& cfg);

// Trust-region controls for tron, the standard values.
struct TronOptions {
  double eta0 = 1e-4;    // accept a step when rho exceeds this
  double eta1 = 0.25;    // shrink the radius when rho falls below this
  double eta2 = 0.75;    // grow the radius when rho exceeds this
  double sigma1 = 0.25;  // strongest shrink factor
  double sigma2 = 0.5;   // mild shrink factor
  double sigma3 = 4.0;   // growth factor
  double cgTol = 0.1;    // inner CG stops at this relative residual
};

// Fixed-step gradient descent.
SolverResult gd(const DifferentiableFunction& c, const DenseVector& x0,
                const SolverConfig& cfg);

// Steepest descent with Armijo backtracking (step halved from cfg.alpha).
SolverResult gdLineSearch(const DifferentiableFunction& c, const DenseVector& x0,
                          const SolverConfig& cfg);

// Barzilai-Borwein spectral step s's / s'y seeding the backtracking.
SolverResult gdBarzilaiBorwein(const DifferentiableFunction& c, const DenseVector& x0,
                               const SolverConfig& cfg);

// Nesterov momentum (k-1)/(k+2) with backtracking at the momentum point.
// The accepted-iterate f trace may be non-monotone.
SolverResult gdNesterov(const DifferentiableFunction& c, const DenseVector& x0,
                        const SolverConfig& cfg);

// Limited-memory BFGS, two-loop recursion (Nocedal & Wright, alg. 7.4).
SolverResult lbfgsMin(const DifferentiableFunction& c, const DenseVector& x0,
                      const SolverConfig& cfg);

// OWL-QN (Andrew & Gao 2007) for L1-regularized losses: L-BFGS on the
// smooth part steered by the pseudo-gradient, iterates confined to the
// chosen orthant so zeros are exact. With lambda == 0 this is lbfgsMin.
SolverResult lbfgsMinOwl(const RegularizedLoss& c, const DenseVector& x0,
                         const SolverConfig& cfg);

// Trust-region Newton with Steihaug CG on Hessian-vector products
// (Lin, Weng & Keerthi 2008). Requires c.hasHessianVectorProduct().
SolverResult tron(const DifferentiableFunction& c, const DenseVector& x0,
                  const SolverConfig& cfg, const TronOptions& opts = {});

// Pseudo-gradient of smooth(w) + lambda * ||w||_1: the usual gradient where
// w_j != 0, and at w_j == 0 the one-sided slope if some descent direction
// exists, else 0.
DenseVector owlPseudoGradient(const DenseVector& smoothGradient, const DenseVector& w,
                              double lambda);

}  // namespace convopt

#endif  // CONVOPT_BATCH_OPT_HPP
