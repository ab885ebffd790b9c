#ifndef CONVOPT_DUAL_OPT_HPP
#define CONVOPT_DUAL_OPT_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "convopt/dataio.hpp"
#include "convopt/solver_result.hpp"

namespace convopt {

// Which SVM dual to solve: hinge loss (box [0, C]) or squared hinge
// (diagonal term 1/(2C), upper bound infinite).
enum class SvmKind { L1Svm, L2Svm };

// Called after each epoch with the dual variables and the maintained
// primal vector; lets tests watch feasibility and dual ascent.
using DualInspector =
    std::function<void(int epoch, const std::vector<double>& alpha, const DenseVector& w)>;

// Dual coordinate descent for linear SVMs (Hsieh et al. 2008). Minimizes
// C * sum_i loss(y_i w'x_i) + 0.5 ||w||^2 through its dual; w is kept
// incrementally in sync with alpha. Examples are visited in a freshly
// shuffled order each epoch; examples with x'x == 0 are skipped. Stops when
// the largest projected gradient magnitude over an epoch drops below tol.
//
// The result's w is the primal solution; f is the primal objective in the
// C-scaled convention above (C = 1/lambda bridges to lambda-scaled tools),
// the trace holds it once per epoch, and `evaluations` counts epochs.
SolverResult svcDual(const Dataset& data, SvmKind kind, double C, double tol, int maxEpochs,
                     std::uint64_t seed, const DualInspector& inspect = {});

}  // namespace convopt

#endif  // CONVOPT_DUAL_OPT_HPP
