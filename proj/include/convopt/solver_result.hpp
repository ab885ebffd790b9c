#ifndef CONVOPT_SOLVER_RESULT_HPP
#define CONVOPT_SOLVER_RESULT_HPP

#include <ostream>
#include <vector>

#include "convopt/linalg.hpp"

namespace convopt {

enum class Termination {
  Converged,        // stopping criterion met
  BudgetExhausted,  // ran out of evaluations (or finished the epoch budget)
  LineSearchFailed, // backtracking underflowed without sufficient decrease
};

inline const char* toString(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::BudgetExhausted: return "budgetExhausted";
    case Termination::LineSearchFailed: return "lineSearchFailed";
  }
  return "?";
}

inline std::ostream& operator<<(std::ostream& os, Termination t) {
  return os << toString(t);
}

// Objective value at an accepted iterate, tagged with the cumulative
// evaluation count at that moment. Epoch-driven solvers record one point
// per epoch instead.
struct TracePoint {
  int evaluation;
  double f;
};

struct SolverResult {
  DenseVector w;
  double f = 0.0;
  int evaluations = 0;
  Termination terminated = Termination::BudgetExhausted;
  std::vector<TracePoint> trace;
};

}  // namespace convopt

#endif  // CONVOPT_SOLVER_RESULT_HPP
