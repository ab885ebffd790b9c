#include "convopt/dataio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>

#include "convopt/errors.hpp"

namespace convopt {

// from_chars does not accept a leading '+', which LIBSVM labels like "+1"
// use all the time, so strip it first.
bool parseDouble(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  if (tok.empty()) return false;
  const char* first = tok.data();
  const char* last = first + tok.size();
  auto [p, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && p == last;
}

bool parseInt(std::string_view tok, int& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  if (tok.empty()) return false;
  const char* first = tok.data();
  const char* last = first + tok.size();
  auto [p, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && p == last;
}

std::vector<std::string_view> splitTokens(std::string_view line) {
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) toks.push_back(line.substr(start, i - start));
  }
  return toks;
}

namespace {

void stripCarriageReturn(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

// Parses one index:value token, appends it to the example (zeros dropped),
// and maintains the strictly-increasing check and running max index.
void parseFeatureToken(std::string_view tok, int indexBase, int lineNo, SparseExample& ex,
                       int& prevIndex, int& maxIndex) {
  std::size_t colon = tok.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == tok.size())
    throw ParseError("expected index:value, got '" + std::string(tok) + "'", lineNo);
  int rawIndex = 0;
  if (!parseInt(tok.substr(0, colon), rawIndex))
    throw ParseError("invalid feature index in '" + std::string(tok) + "'", lineNo);
  if (rawIndex < indexBase)
    throw ParseError("feature index " + std::to_string(rawIndex) + " below index base " +
                         std::to_string(indexBase),
                     lineNo);
  int index = rawIndex - indexBase;
  if (index <= prevIndex)
    throw ParseError("feature indices must be strictly increasing ('" + std::string(tok) + "')",
                     lineNo);
  double value = 0.0;
  if (!parseDouble(tok.substr(colon + 1), value))
    throw ParseError("invalid feature value in '" + std::string(tok) + "'", lineNo);
  if (!std::isfinite(value))
    throw ParseError("non-finite feature value in '" + std::string(tok) + "'", lineNo);
  if (value != 0.0) ex.entries.push_back({index, value});
  prevIndex = index;
  if (index > maxIndex) maxIndex = index;
}

int resolveNumFeatures(int maxIndex, std::optional<int> numFeaturesOverride) {
  int inferred = maxIndex + 1;
  if (numFeaturesOverride && *numFeaturesOverride > inferred) return *numFeaturesOverride;
  return inferred;
}

std::ifstream openForRead(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

}  // namespace

Dataset readLibSVM(std::istream& in, int indexBase, std::optional<int> numFeaturesOverride) {
  if (indexBase != 0 && indexBase != 1) throw ConfigError("indexBase must be 0 or 1");
  Dataset d;
  std::string line;
  int lineNo = 0;
  int maxIndex = -1;
  while (std::getline(in, line)) {
    ++lineNo;
    stripCarriageReturn(line);
    std::vector<std::string_view> toks = splitTokens(line);
    if (toks.empty()) continue;
    double label = 0.0;
    if (!parseDouble(toks[0], label))
      throw ParseError("invalid label '" + std::string(toks[0]) + "'", lineNo);
    if (!std::isfinite(label)) throw ParseError("non-finite label", lineNo);
    SparseExample ex;
    int prevIndex = -1;
    for (std::size_t t = 1; t < toks.size(); ++t)
      parseFeatureToken(toks[t], indexBase, lineNo, ex, prevIndex, maxIndex);
    ex.label = label;
    d.examples.push_back(std::move(ex));
    d.labels.push_back(label);
  }
  d.numFeatures = resolveNumFeatures(maxIndex, numFeaturesOverride);
  return d;
}

Dataset readLibSVM(const std::string& path, int indexBase,
                   std::optional<int> numFeaturesOverride) {
  std::ifstream in = openForRead(path);
  return readLibSVM(in, indexBase, numFeaturesOverride);
}

FeatureSet readFeatureFile(std::istream& in, int indexBase,
                           std::optional<int> numFeaturesOverride) {
  if (indexBase != 0 && indexBase != 1) throw ConfigError("indexBase must be 0 or 1");
  FeatureSet fs;
  std::string line;
  int lineNo = 0;
  int maxIndex = -1;
  while (std::getline(in, line)) {
    ++lineNo;
    stripCarriageReturn(line);
    std::vector<std::string_view> toks = splitTokens(line);
    SparseExample ex;
    int prevIndex = -1;
    for (std::string_view tok : toks)
      parseFeatureToken(tok, indexBase, lineNo, ex, prevIndex, maxIndex);
    fs.examples.push_back(std::move(ex));
  }
  fs.numFeatures = resolveNumFeatures(maxIndex, numFeaturesOverride);
  return fs;
}

FeatureSet readFeatureFile(const std::string& path, int indexBase,
                           std::optional<int> numFeaturesOverride) {
  std::ifstream in = openForRead(path);
  return readFeatureFile(in, indexBase, numFeaturesOverride);
}

DenseVector readLabelFile(std::istream& in, int expectedCount) {
  DenseVector labels;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    stripCarriageReturn(line);
    std::vector<std::string_view> toks = splitTokens(line);
    if (toks.size() != 1)
      throw ParseError("expected one label per line, got " + std::to_string(toks.size()) +
                           " tokens",
                       lineNo);
    double label = 0.0;
    if (!parseDouble(toks[0], label))
      throw ParseError("invalid label '" + std::string(toks[0]) + "'", lineNo);
    if (!std::isfinite(label)) throw ParseError("non-finite label", lineNo);
    labels.push_back(label);
  }
  if (static_cast<int>(labels.size()) != expectedCount)
    throw ParseError("expected " + std::to_string(expectedCount) + " labels, found " +
                     std::to_string(labels.size()));
  return labels;
}

DenseVector readLabelFile(const std::string& path, int expectedCount) {
  std::ifstream in = openForRead(path);
  return readLabelFile(in, expectedCount);
}

std::string formatDouble(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

void writeLibSVM(const Dataset& d, std::ostream& out, int indexBase) {
  if (indexBase != 0 && indexBase != 1) throw ConfigError("indexBase must be 0 or 1");
  if (d.labels.size() != d.examples.size())
    throw DimensionMismatch("writeLibSVM: " + std::to_string(d.examples.size()) +
                            " examples but " + std::to_string(d.labels.size()) + " labels");
  for (std::size_t i = 0; i < d.examples.size(); ++i) {
    out << formatDouble(d.labels[i]);
    for (const SparseEntry& e : d.examples[i].entries)
      out << ' ' << (e.index + indexBase) << ':' << formatDouble(e.value);
    out << '\n';
  }
}

void writeLibSVM(const Dataset& d, const std::string& path, int indexBase) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  writeLibSVM(d, out, indexBase);
  if (!out) throw IoError("error writing '" + path + "'");
}

Dataset makeDataset(FeatureSet features, DenseVector labels) {
  if (features.examples.size() != labels.size())
    throw DimensionMismatch("makeDataset: " + std::to_string(features.examples.size()) +
                            " examples but " + std::to_string(labels.size()) + " labels");
  Dataset d;
  d.examples = std::move(features.examples);
  d.numFeatures = features.numFeatures;
  for (std::size_t i = 0; i < labels.size(); ++i) d.examples[i].label = labels[i];
  d.labels = std::move(labels);
  return d;
}

}  // namespace convopt
