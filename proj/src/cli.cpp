#include "convopt/cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <string_view>
#include <system_error>
#include <utility>

#include "convopt/dataio.hpp"
#include "convopt/errors.hpp"
#include "convopt/ml.hpp"

namespace convopt {

namespace {

int toInt(const std::string& flag, const std::string& value) {
  int out = 0;
  if (!parseInt(value, out))
    throw ConfigError("flag " + flag + " expects an integer, got '" + value + "'");
  return out;
}

double toDouble(const std::string& flag, const std::string& value) {
  double out = 0.0;
  if (!parseDouble(value, out))
    throw ConfigError("flag " + flag + " expects a number, got '" + value + "'");
  return out;
}

bool toBool(const std::string& flag, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("flag " + flag + " expects true or false, got '" + value + "'");
}

std::uint64_t toSeed(const std::string& flag, const std::string& value) {
  std::uint64_t out = 0;
  const char* first = value.data();
  const char* last = first + value.size();
  auto [p, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || p != last || value.empty())
    throw ConfigError("flag " + flag + " expects a nonnegative integer, got '" + value + "'");
  return out;
}

std::vector<std::string> splitCommaList(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    if (comma > start) parts.push_back(s.substr(start, comma - start));
    start = comma + 1;
  }
  return parts;
}

ClassifierSpec specFromOptions(const CliOptions& o) {
  ClassifierSpec spec;
  MethodSpec method = methodFromInt(o.method);
  spec.lossKind = method.kind;
  spec.regularizer = method.reg;
  spec.lambda = o.reg;
  spec.algtype = algTypeFromInt(o.algtype);
  spec.nClasses = o.nClasses;
  spec.batch.alpha = o.alpha;
  spec.batch.gamma = o.gamma;
  spec.batch.maxEval = o.maxIter;
  spec.batch.tol = o.tol;
  spec.batch.memory = o.lbfgsMemory;
  spec.batch.verbosity = o.verbosity;
  spec.stochastic.stepSize = o.stepSize;
  spec.stochastic.decayRate = o.decayRate;
  spec.stochastic.epochs = o.epochs;
  spec.stochastic.miniBatchSize = o.miniBatchSize;
  spec.stochastic.seed = o.seed;
  spec.stochastic.adagradEps = o.adagradEps;
  spec.stochastic.rdaGamma = o.rdaGamma;
  spec.lossOptions.huberThreshold = o.huberThreshold;
  spec.lossOptions.svrEpsilon = o.svrEpsilon;
  return spec;
}

Dataset loadPair(const std::string& featurePath, const std::string& labelPath, int indexBase,
                 std::optional<int> numFeaturesOverride) {
  FeatureSet features = readFeatureFile(featurePath, indexBase, numFeaturesOverride);
  DenseVector labels =
      readLabelFile(labelPath, static_cast<int>(features.examples.size()));
  return makeDataset(std::move(features), std::move(labels));
}

// Exactly one of the combined file or the feature/label pair must describe
// the role; `required` distinguishes "missing" from "absent and fine".
enum class RoleSource { None, Combined, Pair };

RoleSource roleSource(const std::string& role, const std::string& combined,
                      const std::string& featureFile, const std::string& labelFile,
                      bool labelOptional) {
  bool anyPair = !featureFile.empty() || !labelFile.empty();
  if (!combined.empty() && anyPair)
    throw ConfigError("give either -" + role + "File or -" + role +
                      "FeatureFile/-" + role + "LabelFile, not both");
  if (!combined.empty()) return RoleSource::Combined;
  if (!anyPair) return RoleSource::None;
  if (featureFile.empty())
    throw ConfigError("-" + role + "LabelFile needs -" + role + "FeatureFile");
  if (labelFile.empty() && !labelOptional)
    throw ConfigError("-" + role + "FeatureFile needs -" + role + "LabelFile");
  return RoleSource::Pair;
}

std::string formatSeconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", s);
  return buf;
}

}  // namespace

MethodSpec methodFromInt(int method) {
  switch (method) {
    case 0: return {LossKind::Logistic, Regularizer::L2};
    case 1: return {LossKind::HingeSVM, Regularizer::L2};
    case 2: return {LossKind::SmoothSVM, Regularizer::L2};
    case 3: return {LossKind::SmoothSVM, Regularizer::L1};
    case 4: return {LossKind::LeastSquares, Regularizer::L2};
    case 5: return {LossKind::LeastSquares, Regularizer::L1};
    case 6: return {LossKind::Logistic, Regularizer::L1};
    case 7: return {LossKind::Probit, Regularizer::L2};
    case 8: return {LossKind::Probit, Regularizer::L1};
    case 9: return {LossKind::HingeSVM, Regularizer::L1};
    case 10: return {LossKind::HuberSVM, Regularizer::L2};
    case 11: return {LossKind::HuberSVM, Regularizer::L1};
    case 12: return {LossKind::HingeSVR, Regularizer::L2};
    case 13: return {LossKind::HingeSVR, Regularizer::L1};
    case 14: return {LossKind::SmoothSVR, Regularizer::L2};
    case 15: return {LossKind::SmoothSVR, Regularizer::L1};
    default:
      throw ConfigError("unknown method " + std::to_string(method) + " (valid codes: 0..15)");
  }
}

CliOptions parseArgs(const std::vector<std::string>& args) {
  CliOptions o;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& flag = args[i];
    if (flag.size() < 2 || flag[0] != '-' || flag[1] == '-')
      throw ConfigError("unexpected argument '" + flag + "' (flags are single-dash: -method)");
    if (i + 1 >= args.size()) throw ConfigError("flag " + flag + " expects a value");
    const std::string& value = args[++i];
    std::string_view name(flag.data() + 1, flag.size() - 1);
    if (name == "method") o.method = toInt(flag, value);
    else if (name == "algtype") o.algtype = toInt(flag, value);
    else if (name == "reg") o.reg = toDouble(flag, value);
    else if (name == "nClasses") o.nClasses = toInt(flag, value);
    else if (name == "startwith1") o.startwith1 = toBool(flag, value);
    else if (name == "maxIter") o.maxIter = toInt(flag, value);
    else if (name == "tol") o.tol = toDouble(flag, value);
    else if (name == "alpha") o.alpha = toDouble(flag, value);
    else if (name == "gamma") o.gamma = toDouble(flag, value);
    else if (name == "lbfgsMemory") o.lbfgsMemory = toInt(flag, value);
    else if (name == "epochs") o.epochs = toInt(flag, value);
    else if (name == "stepSize") o.stepSize = toDouble(flag, value);
    else if (name == "decayRate") o.decayRate = toDouble(flag, value);
    else if (name == "miniBatchSize") o.miniBatchSize = toInt(flag, value);
    else if (name == "adagradEps") o.adagradEps = toDouble(flag, value);
    else if (name == "rdaGamma") o.rdaGamma = toDouble(flag, value);
    else if (name == "seed") o.seed = toSeed(flag, value);
    else if (name == "huberThreshold") o.huberThreshold = toDouble(flag, value);
    else if (name == "svrEpsilon") o.svrEpsilon = toDouble(flag, value);
    else if (name == "trainFile") o.trainFile = value;
    else if (name == "trainFeatureFile") o.trainFeatureFile = value;
    else if (name == "trainLabelFile") o.trainLabelFile = value;
    else if (name == "testFile") o.testFile = value;
    else if (name == "testFeatureFile") o.testFeatureFile = value;
    else if (name == "testLabelFile") o.testLabelFile = value;
    else if (name == "modelOut") o.modelOut = value;
    else if (name == "modelIn") o.modelIn = value;
    else if (name == "objectives") o.objectives = value;
    else if (name == "solvers") o.solvers = value;
    else if (name == "verbosity") o.verbosity = toInt(flag, value);
    else throw ConfigError("unknown flag " + flag);
  }
  return o;
}

int runTrain(const CliOptions& o, std::ostream& out, std::ostream& err) {
  RoleSource trainSrc = roleSource("train", o.trainFile, o.trainFeatureFile, o.trainLabelFile,
                                   /*labelOptional=*/false);
  if (trainSrc == RoleSource::None)
    throw ConfigError("train needs -trainFile or -trainFeatureFile/-trainLabelFile");
  RoleSource testSrc = roleSource("test", o.testFile, o.testFeatureFile, o.testLabelFile,
                                  /*labelOptional=*/false);
  int base = o.startwith1 ? 1 : 0;
  Dataset trainData = trainSrc == RoleSource::Combined
                          ? readLibSVM(o.trainFile, base)
                          : loadPair(o.trainFeatureFile, o.trainLabelFile, base, std::nullopt);
  ClassifierSpec spec = specFromOptions(o);
  TrainedModel model = train(spec, trainData);
  if (o.verbosity >= 1) {
    for (std::size_t k = 0; k < model.objectives.size(); ++k)
      err << "vector " << k << " objective " << formatDouble(model.objectives[k]) << '\n';
  }
  if (!o.modelOut.empty()) saveModel(model, o.modelOut);
  if (testSrc != RoleSource::None) {
    Dataset testData =
        testSrc == RoleSource::Combined
            ? readLibSVM(o.testFile, base, trainData.numFeatures)
            : loadPair(o.testFeatureFile, o.testLabelFile, base, trainData.numFeatures);
    if (model.nClasses == 0)
      out << "mse " << formatDouble(meanSquaredError(model, testData)) << '\n';
    else
      out << "accuracy " << formatDouble(predictAccuracy(model, testData)) << '\n';
  }
  return 0;
}

int runPredict(const CliOptions& o, std::ostream& out, std::ostream&) {
  if (o.modelIn.empty()) throw ConfigError("predict needs -modelIn");
  TrainedModel model = loadModel(o.modelIn);
  RoleSource testSrc = roleSource("test", o.testFile, o.testFeatureFile, o.testLabelFile,
                                  /*labelOptional=*/true);
  if (testSrc == RoleSource::None)
    throw ConfigError("predict needs -testFile or -testFeatureFile");
  int base = o.startwith1 ? 1 : 0;
  std::vector<SparseExample> examples;
  DenseVector labels;
  bool haveLabels = false;
  if (testSrc == RoleSource::Combined) {
    Dataset d = readLibSVM(o.testFile, base);
    examples = std::move(d.examples);
    labels = std::move(d.labels);
    haveLabels = true;
  } else {
    FeatureSet fs = readFeatureFile(o.testFeatureFile, base);
    examples = std::move(fs.examples);
    if (!o.testLabelFile.empty()) {
      labels = readLabelFile(o.testLabelFile, static_cast<int>(examples.size()));
      haveLabels = true;
    }
  }
  for (const SparseExample& x : examples) out << formatDouble(predict(model, x)) << '\n';
  if (haveLabels) {
    Dataset d;
    d.examples = std::move(examples);
    d.labels = std::move(labels);
    d.numFeatures = model.numFeatures;
    if (model.nClasses == 0)
      out << "mse " << formatDouble(meanSquaredError(model, d)) << '\n';
    else
      out << "accuracy " << formatDouble(predictAccuracy(model, d)) << '\n';
  }
  return 0;
}

namespace {

struct BenchRow {
  const char* name;
  LossKind kind;
  bool dual;
};

constexpr BenchRow kBenchRows[] = {
    {"logistic", LossKind::Logistic, false},
    {"l2svm-primal", LossKind::SmoothSVM, false},
    {"l2svm-dual", LossKind::SmoothSVM, true},
    {"l1svm-primal", LossKind::HingeSVM, false},
    {"l1svm-dual", LossKind::HingeSVM, true},
};

bool benchSupported(const BenchRow& row, AlgType alg) {
  if (row.dual) return alg == AlgType::SvcDual;
  return alg != AlgType::SvcDual && algTypeApplicable(alg, row.kind, Regularizer::L2);
}

}  // namespace

int runBench(const CliOptions& o, std::ostream& out, std::ostream&) {
  RoleSource trainSrc = roleSource("train", o.trainFile, o.trainFeatureFile, o.trainLabelFile,
                                   /*labelOptional=*/false);
  if (trainSrc == RoleSource::None)
    throw ConfigError("bench needs -trainFile or -trainFeatureFile/-trainLabelFile");
  std::vector<BenchRow> rows;
  if (o.objectives.empty() || o.objectives == "all") {
    rows.assign(std::begin(kBenchRows), std::end(kBenchRows));
  } else {
    for (const std::string& name : splitCommaList(o.objectives)) {
      bool found = false;
      for (const BenchRow& row : kBenchRows)
        if (name == row.name) {
          rows.push_back(row);
          found = true;
          break;
        }
      if (!found) throw ConfigError("unknown bench objective '" + name + "'");
    }
  }
  std::vector<AlgType> solvers;
  for (const std::string& name : splitCommaList(o.solvers)) {
    std::optional<AlgType> alg = algTypeFromName(name);
    if (!alg) throw ConfigError("unknown solver '" + name + "'");
    solvers.push_back(*alg);
  }
  if (rows.empty()) throw ConfigError("-objectives selected no rows");
  if (solvers.empty()) throw ConfigError("-solvers selected no solvers");

  int base = o.startwith1 ? 1 : 0;
  Dataset trainData = trainSrc == RoleSource::Combined
                          ? readLibSVM(o.trainFile, base)
                          : loadPair(o.trainFeatureFile, o.trainLabelFile, base, std::nullopt);

  out << "objective\tsolver\tseconds\tobjective_value\ttrain_accuracy\n";
  for (const BenchRow& row : rows) {
    for (AlgType alg : solvers) {
      if (!benchSupported(row, alg)) {
        out << row.name << '\t' << toString(alg) << "\t*\t*\t*\n";
        continue;
      }
      ClassifierSpec spec = specFromOptions(o);
      spec.lossKind = row.kind;
      spec.regularizer = Regularizer::L2;
      spec.algtype = alg;
      spec.nClasses = 2;
      auto start = std::chrono::steady_clock::now();
      TrainedModel model = train(spec, trainData);
      std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      double accuracy = predictAccuracy(model, trainData);
      out << row.name << '\t' << toString(alg) << '\t' << formatSeconds(elapsed.count())
          << '\t' << formatDouble(model.objectives[0]) << '\t' << formatDouble(accuracy)
          << '\n';
    }
  }
  return 0;
}

const char* usageText() {
  return
      "usage: convopt <train|predict|bench> [-flag value ...]\n"
      "\n"
      "data (feature indices start at 1 unless -startwith1 false):\n"
      "  -trainFile f           combined LIBSVM file (label index:value ...)\n"
      "  -trainFeatureFile f    features only, with labels in -trainLabelFile\n"
      "  -testFile f, -testFeatureFile f, -testLabelFile f   test-role equivalents\n"
      "  -modelOut f            write the trained model (train)\n"
      "  -modelIn f             model to load (predict)\n"
      "\n"
      "objective:\n"
      "  -method k     0 logistic/L2      1 hingeSVM/L2     2 smoothSVM/L2\n"
      "                3 smoothSVM/L1     4 leastSquares/L2 5 leastSquares/L1\n"
      "                6 logistic/L1      7 probit/L2       8 probit/L1\n"
      "                9 hingeSVM/L1     10 huberSVM/L2    11 huberSVM/L1\n"
      "               12 hingeSVR/L2     13 hingeSVR/L1    14 smoothSVR/L2\n"
      "               15 smoothSVR/L1\n"
      "  -reg x        regularization weight lambda (default 1)\n"
      "  -nClasses k   distinct labels expected for classification (default 2)\n"
      "  -huberThreshold x, -svrEpsilon x   loss shape (defaults 0.5, 0.1)\n"
      "\n"
      "solver:\n"
      "  -algtype k    0 lbfgsMinOwl  1 gd            2 gdLineSearch\n"
      "                3 gdBarzilaiBorwein  4 gdNesterov  5 lbfgsMin (default)\n"
      "                6 tron         7 svcDual       8 sgd\n"
      "                9 sgdDecayingLearningRate  10 sgdAdagrad\n"
      "               11 sgdStochasticAverageGradient\n"
      "               12 sgdRegularizedDualAveraging\n"
      "               13 sgdRegularizedDualAveragingAdagrad\n"
      "  -maxIter k    evaluation budget / dual epochs (default 250)\n"
      "  -tol x        gradient / violation tolerance (default 0.01)\n"
      "  -alpha x, -gamma x, -lbfgsMemory k   batch solver knobs\n"
      "  -epochs k, -stepSize x, -decayRate x, -miniBatchSize k,\n"
      "  -adagradEps x, -rdaGamma x, -seed k  epoch solver knobs\n"
      "\n"
      "bench:\n"
      "  -objectives list   comma list of logistic,l2svm-primal,l2svm-dual,\n"
      "                     l1svm-primal,l1svm-dual (default all)\n"
      "  -solvers list      comma list of solver names (default lbfgsMin,tron,svcDual)\n"
      "\n"
      "  -verbosity k       >=1 objectives to stderr, >=2 solver iterations\n";
}

int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    if (argc < 2) {
      err << usageText();
      return 1;
    }
    std::string cmd = argv[1];
    if (cmd == "help" || cmd == "-help" || cmd == "--help") {
      out << usageText();
      return 0;
    }
    std::vector<std::string> rest;
    for (int i = 2; i < argc; ++i) rest.emplace_back(argv[i]);
    CliOptions o = parseArgs(rest);
    if (cmd == "train") return runTrain(o, out, err);
    if (cmd == "predict") return runPredict(o, out, err);
    if (cmd == "bench") return runBench(o, out, err);
    err << "unknown command '" << cmd << "' (run 'convopt help')\n";
    return 1;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\nrun 'convopt help' for usage\n";
    return 1;
  } catch (const UnsupportedOperation& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace convopt
