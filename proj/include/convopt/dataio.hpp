#ifndef CONVOPT_DATAIO_HPP
#define CONVOPT_DATAIO_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "convopt/linalg.hpp"

namespace convopt {

// A loaded dataset: n sparse examples, one label per example, and the
// feature count m. Every stored feature index is < m.
struct Dataset {
  std::vector<SparseExample> examples;
  DenseVector labels;
  int numFeatures = 0;

  int numExamples() const { return static_cast<int>(examples.size()); }
};

// Contents of a label-less feature file.
struct FeatureSet {
  std::vector<SparseExample> examples;
  int numFeatures = 0;
};

// LIBSVM text: one `label index:value ...` line per example, indices
// strictly increasing within a line, blank lines skipped. indexBase (0 or 1)
// is subtracted from file indices. numFeatures is inferred as 1 + the
// largest shifted index, or forced at least numFeaturesOverride so a test
// set can share the training dimensionality. Explicit zero values are
// dropped. Malformed lines raise ParseError with the line number.
Dataset readLibSVM(std::istream& in, int indexBase,
                   std::optional<int> numFeaturesOverride = std::nullopt);
Dataset readLibSVM(const std::string& path, int indexBase,
                   std::optional<int> numFeaturesOverride = std::nullopt);

// Feature file: like LIBSVM lines without the leading label. Every line is
// one example; a blank line is an example with no features.
FeatureSet readFeatureFile(std::istream& in, int indexBase,
                           std::optional<int> numFeaturesOverride = std::nullopt);
FeatureSet readFeatureFile(const std::string& path, int indexBase,
                           std::optional<int> numFeaturesOverride = std::nullopt);

// Label file: exactly expectedCount lines, one numeric label each.
DenseVector readLabelFile(std::istream& in, int expectedCount);
DenseVector readLabelFile(const std::string& path, int expectedCount);

// Inverse of readLibSVM. Values print in shortest round-trip decimal form,
// so write -> read -> write is byte-identical.
void writeLibSVM(const Dataset& d, std::ostream& out, int indexBase);
void writeLibSVM(const Dataset& d, const std::string& path, int indexBase);

// Pairs a feature set with its labels; lengths must agree.
Dataset makeDataset(FeatureSet features, DenseVector labels);

// Shortest decimal string that parses back to exactly v. Locale-independent.
std::string formatDouble(double v);

// Strict locale-independent parses of a whole token (leading '+' allowed).
bool parseDouble(std::string_view tok, double& out);
bool parseInt(std::string_view tok, int& out);

// Splits on spaces and tabs; the views alias `line`.
std::vector<std::string_view> splitTokens(std::string_view line);

}  // namespace convopt

#endif  // CONVOPT_DATAIO_HPP
