#include "convopt/ml.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <utility>

#include "convopt/dual_opt.hpp"
#include "convopt/errors.hpp"
#include "convopt/random.hpp"

namespace convopt {

namespace {

constexpr struct {
  AlgType alg;
  const char* name;
} kAlgNames[] = {
    {AlgType::OwlQn, "lbfgsMinOwl"},
    {AlgType::Gd, "gd"},
    {AlgType::GdLineSearch, "gdLineSearch"},
    {AlgType::GdBarzilaiBorwein, "gdBarzilaiBorwein"},
    {AlgType::GdNesterov, "gdNesterov"},
    {AlgType::LbfgsMin, "lbfgsMin"},
    {AlgType::Tron, "tron"},
    {AlgType::SvcDual, "svcDual"},
    {AlgType::Sgd, "sgd"},
    {AlgType::SgdDecayingLearningRate, "sgdDecayingLearningRate"},
    {AlgType::SgdAdagrad, "sgdAdagrad"},
    {AlgType::SgdStochasticAverageGradient, "sgdStochasticAverageGradient"},
    {AlgType::SgdRegularizedDualAveraging, "sgdRegularizedDualAveraging"},
    {AlgType::SgdRegularizedDualAveragingAdagrad, "sgdRegularizedDualAveragingAdagrad"},
};

}  // namespace

const char* toString(AlgType a) {
  for (const auto& e : kAlgNames)
    if (e.alg == a) return e.name;
  return "?";
}

AlgType algTypeFromInt(int code) {
  if (code < 0 || code > 13)
    throw ConfigError("unknown algtype " + std::to_string(code) + " (valid codes: 0..13)");
  return static_cast<AlgType>(code);
}

std::optional<AlgType> algTypeFromName(std::string_view name) {
  for (const auto& e : kAlgNames)
    if (name == e.name) return e.alg;
  return std::nullopt;
}

bool algTypeApplicable(AlgType a, LossKind kind, Regularizer reg) {
  switch (a) {
    case AlgType::OwlQn:
    case AlgType::SgdRegularizedDualAveraging:
    case AlgType::SgdRegularizedDualAveragingAdagrad:
      return reg == Regularizer::L1;
    case AlgType::Tron:
      return reg == Regularizer::L2 && supportsHessianVectorProduct(kind);
    case AlgType::SvcDual:
      return reg == Regularizer::L2 &&
             (kind == LossKind::HingeSVM || kind == LossKind::SmoothSVM);
    case AlgType::SgdStochasticAverageGradient:
      return reg == Regularizer::L2;
    default:
      return true;
  }
}

void validate(const ClassifierSpec& spec) {
  if (!(spec.lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  validate(spec.batch);
  validate(spec.stochastic);
  if (!(spec.lossOptions.huberThreshold > 0.0)) throw ConfigError("huberThreshold must be > 0");
  if (!(spec.lossOptions.svrEpsilon >= 0.0)) throw ConfigError("svrEpsilon must be >= 0");
  if (isClassificationLoss(spec.lossKind) && spec.nClasses < 2)
    throw ConfigError("nClasses must be >= 2 for classification");
  if (!algTypeApplicable(spec.algtype, spec.lossKind, spec.regularizer))
    throw ConfigError(std::string(toString(spec.algtype)) + " cannot minimize " +
                      toString(spec.lossKind) + " with " + toString(spec.regularizer) +
                      " regularization");
  if (spec.algtype == AlgType::SvcDual && !(spec.lambda > 0.0))
    throw ConfigError("svcDual needs lambda > 0 (it solves the C = 1/lambda dual)");
}

namespace {

struct SingleResult {
  DenseVector w;
  double objective;
};

// Trains one weight vector on labels already in solver form (remapped to
// {-1,+1} for classification). The reported objective is always the
// lambda-scaled one, so primal and dual routes are directly comparable.
SingleResult trainSingle(const ClassifierSpec& spec, const Dataset& data) {
  RegularizedLoss loss(data, spec.lossKind, spec.regularizer, spec.lambda, spec.lossOptions);
  DenseVector x0(static_cast<std::size_t>(data.numFeatures), 0.0);
  SolverResult r;
  switch (spec.algtype) {
    case AlgType::OwlQn:
      r = lbfgsMinOwl(loss, x0, spec.batch);
      break;
    case AlgType::Gd:
      r = gd(loss, x0, spec.batch);
      break;
    case AlgType::GdLineSearch:
      r = gdLineSearch(loss, x0, spec.batch);
      break;
    case AlgType::GdBarzilaiBorwein:
      r = gdBarzilaiBorwein(loss, x0, spec.batch);
      break;
    case AlgType::GdNesterov:
      r = gdNesterov(loss, x0, spec.batch);
      break;
    case AlgType::LbfgsMin:
      r = lbfgsMin(loss, x0, spec.batch);
      break;
    case AlgType::Tron:
      r = tron(loss, x0, spec.batch);
      break;
    case AlgType::SvcDual: {
      SvmKind kind = spec.lossKind == LossKind::HingeSVM ? SvmKind::L1Svm : SvmKind::L2Svm;
      r = svcDual(data, kind, 1.0 / spec.lambda, spec.batch.tol, spec.batch.maxEval,
                  spec.stochastic.seed);
      break;
    }
    case AlgType::Sgd:
      r = sgd(loss, x0, spec.stochastic);
      break;
    case AlgType::SgdDecayingLearningRate:
      r = sgdDecayingLearningRate(loss, x0, spec.stochastic);
      break;
    case AlgType::SgdAdagrad:
      r = sgdAdagrad(loss, x0, spec.stochastic);
      break;
    case AlgType::SgdStochasticAverageGradient:
      r = sgdStochasticAverageGradient(loss, x0, spec.stochastic);
      break;
    case AlgType::SgdRegularizedDualAveraging:
      r = sgdRegularizedDualAveraging(loss, x0, spec.stochastic);
      break;
    case AlgType::SgdRegularizedDualAveragingAdagrad:
      r = sgdRegularizedDualAveragingAdagrad(loss, x0, spec.stochastic);
      break;
  }
  double objective = loss.dataValue(r.w) + loss.regularizerValue(r.w);
  return {std::move(r.w), objective};
}

std::vector<double> distinctSortedLabels(const Dataset& data) {
  std::vector<double> labels = data.labels;
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return labels;
}

Dataset remapLabels(const Dataset& data, double positiveLabel) {
  Dataset remapped = data;
  for (int i = 0; i < data.numExamples(); ++i) {
    double y = data.labels[static_cast<std::size_t>(i)] == positiveLabel ? 1.0 : -1.0;
    remapped.labels[static_cast<std::size_t>(i)] = y;
    remapped.examples[static_cast<std::size_t>(i)].label = y;
  }
  return remapped;
}

double scoreDroppingOverflow(const DenseVector& w, const SparseExample& x) {
  double s = 0.0;
  for (const SparseEntry& e : x.entries) {
    if (e.index < 0) throw DimensionMismatch("negative feature index in example");
    if (static_cast<std::size_t>(e.index) < w.size()) s += w[e.index] * e.value;
    // features the model never saw are ignored
  }
  return s;
}

}  // namespace

TrainedModel train(const ClassifierSpec& spec, const Dataset& data) {
  validate(spec);
  if (data.numExamples() < 1) throw ConfigError("train needs a nonempty dataset");
  TrainedModel model;
  model.numFeatures = data.numFeatures;
  if (!isClassificationLoss(spec.lossKind)) {
    SingleResult r = trainSingle(spec, data);
    model.nClasses = 0;
    model.weights.push_back(std::move(r.w));
    model.objectives.push_back(r.objective);
    return model;
  }
  std::vector<double> labels = distinctSortedLabels(data);
  if (labels.size() < 2) throw ConfigError("training data contains a single class");
  if (static_cast<int>(labels.size()) != spec.nClasses)
    throw ConfigError("nClasses is " + std::to_string(spec.nClasses) + " but the data has " +
                      std::to_string(labels.size()) + " distinct labels");
  model.nClasses = spec.nClasses;
  model.classLabels = labels;
  if (spec.nClasses == 2) {
    // One model; the ascending-order second label is the positive class.
    SingleResult r = trainSingle(spec, remapLabels(data, labels[1]));
    model.weights.push_back(std::move(r.w));
    model.objectives.push_back(r.objective);
  } else {
    for (double positive : labels) {  // one-vs-rest, ascending label order
      SingleResult r = trainSingle(spec, remapLabels(data, positive));
      model.weights.push_back(std::move(r.w));
      model.objectives.push_back(r.objective);
    }
  }
  return model;
}

double predict(const TrainedModel& model, const SparseExample& x) {
  if (model.weights.empty()) throw ConfigError("model has no weight vectors");
  if (model.nClasses == 0) return scoreDroppingOverflow(model.weights[0], x);
  if (model.nClasses == 2) {
    double s = scoreDroppingOverflow(model.weights[0], x);
    return s >= 0.0 ? model.classLabels[1] : model.classLabels[0];  // tie -> positive
  }
  std::size_t best = 0;
  double bestScore = scoreDroppingOverflow(model.weights[0], x);
  for (std::size_t k = 1; k < model.weights.size(); ++k) {
    double s = scoreDroppingOverflow(model.weights[k], x);
    if (s > bestScore) {  // ties keep the lowest class index
      best = k;
      bestScore = s;
    }
  }
  return model.classLabels[best];
}

double predictAccuracy(const TrainedModel& model, const Dataset& test) {
  if (model.nClasses < 2)
    throw UnsupportedOperation("predictAccuracy needs a classification model");
  if (test.numExamples() < 1) throw ConfigError("empty test set");
  if (test.labels.size() != test.examples.size())
    throw DimensionMismatch("test example and label counts differ");
  int correct = 0;
  for (int i = 0; i < test.numExamples(); ++i)
    if (predict(model, test.examples[static_cast<std::size_t>(i)]) ==
        test.labels[static_cast<std::size_t>(i)])
      ++correct;
  return static_cast<double>(correct) / test.numExamples();
}

double meanSquaredError(const TrainedModel& model, const Dataset& test) {
  if (model.nClasses != 0)
    throw UnsupportedOperation("meanSquaredError needs a regression model");
  if (test.numExamples() < 1) throw ConfigError("empty test set");
  if (test.labels.size() != test.examples.size())
    throw DimensionMismatch("test example and label counts differ");
  double sum = 0.0;
  for (int i = 0; i < test.numExamples(); ++i) {
    double r = predict(model, test.examples[static_cast<std::size_t>(i)]) -
               test.labels[static_cast<std::size_t>(i)];
    sum += r * r;
  }
  return sum / test.numExamples();
}

CrossValResult crossValidate(const ClassifierSpec& spec, const Dataset& data, int folds,
                             std::uint64_t seed) {
  validate(spec);
  int n = data.numExamples();
  if (folds < 2) throw ConfigError("folds must be >= 2");
  if (folds > n) throw ConfigError("folds must not exceed the number of examples");
  Rng rng(seed);
  std::vector<int> perm = shuffledIndices(rng, n);
  CrossValResult result;
  int base = n / folds;
  int rem = n % folds;
  int foldStart = 0;
  for (int f = 0; f < folds; ++f) {
    int foldSize = base + (f < rem ? 1 : 0);
    Dataset trainPart, testPart;
    trainPart.numFeatures = data.numFeatures;
    testPart.numFeatures = data.numFeatures;
    for (int pos = 0; pos < n; ++pos) {
      bool held = pos >= foldStart && pos < foldStart + foldSize;
      Dataset& part = held ? testPart : trainPart;
      std::size_t ex = static_cast<std::size_t>(perm[static_cast<std::size_t>(pos)]);
      part.examples.push_back(data.examples[ex]);
      part.labels.push_back(data.labels[ex]);
    }
    foldStart += foldSize;
    TrainedModel model = train(spec, trainPart);
    result.perFold.push_back(predictAccuracy(model, testPart));
  }
  double sum = 0.0;
  for (double a : result.perFold) sum += a;
  result.meanAccuracy = sum / folds;
  return result;
}

namespace {

void checkModelShape(const TrainedModel& model) {
  std::size_t expectVectors = model.nClasses > 2 ? static_cast<std::size_t>(model.nClasses) : 1;
  std::size_t expectLabels = static_cast<std::size_t>(model.nClasses);
  if (model.nClasses < 0 || model.nClasses == 1)
    throw ConfigError("model nClasses must be 0 or >= 2");
  if (model.weights.size() != expectVectors || model.classLabels.size() != expectLabels)
    throw ConfigError("model shape does not match its nClasses");
  for (const DenseVector& w : model.weights)
    if (static_cast<int>(w.size()) != model.numFeatures)
      throw ConfigError("model weight vector length does not match numFeatures");
}

}  // namespace

void saveModel(const TrainedModel& model, std::ostream& out) {
  checkModelShape(model);
  out << model.numFeatures << ' ' << model.nClasses << '\n';
  for (std::size_t j = 0; j < model.classLabels.size(); ++j) {
    if (j > 0) out << ' ';
    out << formatDouble(model.classLabels[j]);
  }
  out << '\n';
  for (const DenseVector& w : model.weights) {
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (j > 0) out << ' ';
      out << formatDouble(w[j]);
    }
    out << '\n';
  }
}

void saveModel(const TrainedModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  saveModel(model, out);
  if (!out) throw IoError("error writing '" + path + "'");
}

TrainedModel loadModel(std::istream& in) {
  std::string line;
  int lineNo = 0;
  auto nextLine = [&]() {
    if (!std::getline(in, line)) throw ParseError("unexpected end of model file", lineNo + 1);
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };

  nextLine();
  std::vector<std::string_view> toks = splitTokens(line);
  TrainedModel model;
  int nClasses = 0;
  if (toks.size() != 2 || !parseInt(toks[0], model.numFeatures) || !parseInt(toks[1], nClasses))
    throw ParseError("expected 'numFeatures nClasses'", lineNo);
  if (model.numFeatures < 0) throw ParseError("negative numFeatures", lineNo);
  if (nClasses < 0 || nClasses == 1) throw ParseError("nClasses must be 0 or >= 2", lineNo);
  model.nClasses = nClasses;

  nextLine();
  toks = splitTokens(line);
  if (static_cast<int>(toks.size()) != nClasses)
    throw ParseError("expected " + std::to_string(nClasses) + " class labels, got " +
                         std::to_string(toks.size()),
                     lineNo);
  for (std::string_view t : toks) {
    double label = 0.0;
    if (!parseDouble(t, label) || !std::isfinite(label))
      throw ParseError("invalid class label '" + std::string(t) + "'", lineNo);
    if (!model.classLabels.empty() && label <= model.classLabels.back())
      throw ParseError("class labels must be strictly ascending", lineNo);
    model.classLabels.push_back(label);
  }

  int numVectors = nClasses > 2 ? nClasses : 1;
  for (int k = 0; k < numVectors; ++k) {
    nextLine();
    toks = splitTokens(line);
    if (static_cast<int>(toks.size()) != model.numFeatures)
      throw ParseError("expected " + std::to_string(model.numFeatures) + " weights, got " +
                           std::to_string(toks.size()),
                       lineNo);
    DenseVector w;
    w.reserve(toks.size());
    for (std::string_view t : toks) {
      double v = 0.0;
      if (!parseDouble(t, v) || !std::isfinite(v))
        throw ParseError("invalid weight '" + std::string(t) + "'", lineNo);
      w.push_back(v);
    }
    model.weights.push_back(std::move(w));
  }
  if (std::getline(in, line)) throw ParseError("unexpected trailing line", lineNo + 1);
  checkModelShape(model);
  return model;
}

TrainedModel loadModel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return loadModel(in);
}

}  // namespace convopt
