#ifndef CONVOPT_CLI_HPP
#define CONVOPT_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "convopt/losses.hpp"

namespace convopt {

// Everything the command line can set. Flags are liblinear style: a single
// dash, the long name, then one value argument (`-method 3 -reg 0.25`).
struct CliOptions {
  int method = 0;        // loss/regularizer pair, see methodFromInt
  int algtype = 5;       // solver code, see AlgType (5 = lbfgsMin)
  double reg = 1.0;      // lambda
  int nClasses = 2;
  bool startwith1 = true;  // feature indices in the files start at 1

  // batch solver knobs
  int maxIter = 250;
  double tol = 0.01;
  double alpha = 1.0;
  double gamma = 1e-4;
  int lbfgsMemory = 100;

  // epoch solver knobs
  int epochs = 50;
  double stepSize = 1e-5;
  double decayRate = 1e-3;
  int miniBatchSize = 1;
  double adagradEps = 1e-8;
  double rdaGamma = 1.0;
  std::uint64_t seed = 1;

  // loss shape knobs
  double huberThreshold = 0.5;
  double svrEpsilon = 0.1;

  // data roles: either a combined LIBSVM file or a feature/label pair
  std::string trainFile, trainFeatureFile, trainLabelFile;
  std::string testFile, testFeatureFile, testLabelFile;
  std::string modelOut, modelIn;

  // bench table shape
  std::string objectives;                          // comma list; empty = all rows
  std::string solvers = "lbfgsMin,tron,svcDual";   // comma list of solver names

  int verbosity = 0;
};

// Parses flag/value pairs (everything after the subcommand). Throws
// ConfigError on unknown flags or malformed values.
CliOptions parseArgs(const std::vector<std::string>& args);

struct MethodSpec {
  LossKind kind;
  Regularizer reg;
};

// The frozen method table, codes 0..15. Throws ConfigError on unknown codes.
MethodSpec methodFromInt(int method);

// Subcommand bodies. Exceptions escape to runCli for exit-code mapping.
int runTrain(const CliOptions& opts, std::ostream& out, std::ostream& err);
int runPredict(const CliOptions& opts, std::ostream& out, std::ostream& err);
int runBench(const CliOptions& opts, std::ostream& out, std::ostream& err);

// Full entry point: dispatches argv[1] (train / predict / bench / help).
// Returns the process exit code: 0 success, 1 usage or configuration
// errors, 2 data or model file errors.
int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

const char* usageText();

}  // namespace convopt

#endif  // CONVOPT_CLI_HPP
