#ifndef CONVOPT_ML_HPP
#define CONVOPT_ML_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "convopt/batch_opt.hpp"
#include "convopt/dataio.hpp"
#include "convopt/losses.hpp"
#include "convopt/stochastic_opt.hpp"

namespace convopt {

// Every solver in the toolkit, with the numeric codes the CLI accepts.
// The values are a stable external interface; never renumber.
enum class AlgType {
  OwlQn = 0,
  Gd = 1,
  GdLineSearch = 2,
  GdBarzilaiBorwein = 3,
  GdNesterov = 4,
  LbfgsMin = 5,
  Tron = 6,
  SvcDual = 7,
  Sgd = 8,
  SgdDecayingLearningRate = 9,
  SgdAdagrad = 10,
  SgdStochasticAverageGradient = 11,
  SgdRegularizedDualAveraging = 12,
  SgdRegularizedDualAveragingAdagrad = 13,
};

const char* toString(AlgType a);
AlgType algTypeFromInt(int code);  // throws ConfigError on unknown codes
std::optional<AlgType> algTypeFromName(std::string_view name);

inline std::ostream& operator<<(std::ostream& os, AlgType a) { return os << toString(a); }

// Can this solver minimize this loss/regularizer pair? The structural
// limits: OwlQn and the RDA variants need L1; tron needs Hessian-vector
// products and L2; svcDual solves the SVM duals (hinge or squared hinge,
// L2); SAG needs L2.
bool algTypeApplicable(AlgType a, LossKind kind, Regularizer reg);

// A full training recipe: which objective to build and how to minimize it.
struct ClassifierSpec {
  LossKind lossKind = LossKind::Logistic;
  Regularizer regularizer = Regularizer::L2;
  double lambda = 1.0;
  AlgType algtype = AlgType::LbfgsMin;
  int nClasses = 2;            // ignored by the regression losses
  SolverConfig batch;          // batch solvers; svcDual reads tol and maxEval (as epochs)
  StochasticConfig stochastic; // epoch solvers; svcDual shares its seed
  LossOptions lossOptions;
};

// Throws ConfigError on bad fields or an inapplicable solver/loss pair.
void validate(const ClassifierSpec& spec);

// nClasses == 0 marks a regression model (one weight vector, no labels).
// Binary models keep one vector scoring the higher class; multiclass keeps
// one one-vs-rest vector per class in ascending label order.
struct TrainedModel {
  int numFeatures = 0;
  int nClasses = 0;
  std::vector<double> classLabels;   // ascending raw labels; empty for regression
  std::vector<DenseVector> weights;
  std::vector<double> objectives;    // final lambda-scaled objective per vector
};

// Classification losses: raw labels are collected, sorted ascending, and
// remapped to {-1,+1} (binary) or one-vs-rest (multiclass; nClasses must
// match the distinct-label count). Regression losses train one vector on
// the raw labels.
TrainedModel train(const ClassifierSpec& spec, const Dataset& data);

// Raw predicted label (classification) or real-valued score (regression).
// Features with index >= numFeatures are dropped. Ties break toward the
// positive class (binary) or the lowest class index (multiclass).
double predict(const TrainedModel& model, const SparseExample& x);

// Fraction of test examples predicted exactly right. Classification only.
double predictAccuracy(const TrainedModel& model, const Dataset& test);

// Mean of (prediction - label)^2; regression models only.
double meanSquaredError(const TrainedModel& model, const Dataset& test);

struct CrossValResult {
  double meanAccuracy = 0.0;
  std::vector<double> perFold;
};

// Seeded shuffle, then contiguous folds with sizes differing by at most
// one; each fold is held out once. folds must be in [2, n].
CrossValResult crossValidate(const ClassifierSpec& spec, const Dataset& data, int folds,
                             std::uint64_t seed);

// Text format: `numFeatures nClasses`, the class labels on one line (blank
// for regression), then one weight vector per line. Round-trips exactly.
void saveModel(const TrainedModel& model, std::ostream& out);
void saveModel(const TrainedModel& model, const std::string& path);
TrainedModel loadModel(std::istream& in);
TrainedModel loadModel(const std::string& path);

}  // namespace convopt

#endif  // CONVOPT_ML_HPP
