#include "convopt/dataio.hpp"

#include <sstream>

#include "convopt/errors.hpp"
#include "doctest.h"
#include "support/test_util.hpp"

using namespace convopt;
using namespace convopt::testsupport;

TEST_SUITE_BEGIN("dataio");

TEST_CASE("readLibSVM parses labels and 1-based entries") {
  std::istringstream in("+1 1:0.5 3:2\n-1 2:-1.5\n");
  Dataset d = readLibSVM(in, 1);
  REQUIRE(d.numExamples() == 2);
  CHECK(d.numFeatures == 3);
  CHECK(d.labels == DenseVector{1.0, -1.0});
  REQUIRE(d.examples[0].entries.size() == 2);
  CHECK(d.examples[0].entries[0].index == 0);
  CHECK(d.examples[0].entries[0].value == 0.5);
  CHECK(d.examples[0].entries[1].index == 2);
  CHECK(d.examples[1].entries[0].index == 1);
  CHECK(d.examples[1].entries[0].value == -1.5);
  REQUIRE(d.examples[0].label.has_value());
  CHECK(*d.examples[0].label == 1.0);
}

TEST_CASE("readLibSVM with 0-based indices keeps them as is") {
  std::istringstream in("2 0:1 4:1\n");
  Dataset d = readLibSVM(in, 0);
  CHECK(d.numFeatures == 5);
  CHECK(d.examples[0].entries[1].index == 4);
}

TEST_CASE("indexBase outside {0,1} is rejected") {
  std::istringstream in("1 1:1\n");
  CHECK_THROWS_AS(readLibSVM(in, 2), ConfigError);
}

TEST_CASE("blank lines and CRLF endings are tolerated") {
  std::istringstream in("\n+1 1:1\r\n\r\n-1 1:-1\n");
  Dataset d = readLibSVM(in, 1);
  CHECK(d.numExamples() == 2);
  CHECK(d.labels == DenseVector{1.0, -1.0});
}

TEST_CASE("label-only lines make empty examples") {
  std::istringstream in("3.5\n");
  Dataset d = readLibSVM(in, 1);
  REQUIRE(d.numExamples() == 1);
  CHECK(d.examples[0].entries.empty());
  CHECK(d.numFeatures == 0);
  CHECK(d.labels[0] == 3.5);
}

TEST_CASE("explicit zeros are dropped but still bump the feature count") {
  std::istringstream in("1 1:0 3:2\n");
  Dataset d = readLibSVM(in, 1);
  REQUIRE(d.examples[0].entries.size() == 1);
  CHECK(d.examples[0].entries[0].index == 2);
  CHECK(d.numFeatures == 3);
}

TEST_CASE("numFeaturesOverride only ever raises the feature count") {
  std::istringstream in1("1 1:1\n");
  CHECK(readLibSVM(in1, 1, 10).numFeatures == 10);
  std::istringstream in2("1 1:1 7:1\n");
  CHECK(readLibSVM(in2, 1, 3).numFeatures == 7);
}

TEST_CASE("parse errors carry the line number") {
  auto expectError = [](const std::string& text, int line) {
    std::istringstream in(text);
    try {
      readLibSVM(in, 1);
      FAIL("expected ParseError for: " << text);
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
    }
  };
  expectError("abc 1:1\n", 1);              // unparsable label
  expectError("1 1:1\n1 x:1\n", 2);         // unparsable index
  expectError("1 1:y\n", 1);                // unparsable value
  expectError("1 1:1 1:2\n", 1);            // repeated index
  expectError("1 3:1 2:1\n", 1);            // decreasing index
  expectError("1 0:1\n", 1);                // below a 1-based index base
  expectError("1 1\n", 1);                  // missing colon
  expectError("1 1:inf\n", 1);              // non-finite value
  expectError("1 1:1e\n", 1);               // trailing junk in the number
}

TEST_CASE("zero values still participate in the ordering check") {
  std::istringstream in("1 2:0 2:1\n");
  CHECK_THROWS_AS(readLibSVM(in, 1), ParseError);
}

TEST_CASE("write then read then write is byte-identical") {
  std::string text = "1 1:0.1 4:-2.5\n-1 2:3\n0.25 1:1e-30\n";
  std::istringstream in(text);
  Dataset d = readLibSVM(in, 1);
  std::ostringstream out1;
  writeLibSVM(d, out1, 1);
  std::istringstream in2(out1.str());
  Dataset d2 = readLibSVM(in2, 1);
  std::ostringstream out2;
  writeLibSVM(d2, out2, 1);
  CHECK(out1.str() == out2.str());
  // 0.1 has no exact binary form; the shortest round-trip string is "0.1".
  CHECK(out1.str().find("1:0.1") != std::string::npos);
}

TEST_CASE("formatDouble round-trips exactly") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 123456789.123456789, 0.0}) {
    double back = 0.0;
    REQUIRE(parseDouble(formatDouble(v), back));
    CHECK(back == v);
  }
  CHECK(formatDouble(1.0) == "1");
}

TEST_CASE("parseDouble accepts a leading plus and rejects junk") {
  double v = 0.0;
  CHECK(parseDouble("+3.5", v));
  CHECK(v == 3.5);
  CHECK(parseDouble("-2e-3", v));
  CHECK(v == -2e-3);
  CHECK_FALSE(parseDouble("", v));
  CHECK_FALSE(parseDouble("+", v));
  CHECK_FALSE(parseDouble("1.5x", v));
  CHECK_FALSE(parseDouble("0x10", v));
}

TEST_CASE("feature files are label-less LIBSVM lines") {
  std::istringstream in("1:2 2:1\n\n1:-1\n");
  FeatureSet fs = readFeatureFile(in, 1);
  REQUIRE(fs.examples.size() == 3);
  CHECK(fs.examples[1].entries.empty());  // blank line = empty example
  CHECK(fs.numFeatures == 2);
  CHECK_FALSE(fs.examples[0].label.has_value());
}

TEST_CASE("label files demand one value per line and an exact count") {
  std::istringstream good("+1\n-1\n2.5\n");
  DenseVector y = readLabelFile(good, 3);
  CHECK(y == DenseVector{1.0, -1.0, 2.5});

  std::istringstream tooFew("1\n");
  CHECK_THROWS_AS(readLabelFile(tooFew, 2), ParseError);
  std::istringstream tooMany("1\n2\n3\n");
  CHECK_THROWS_AS(readLabelFile(tooMany, 2), ParseError);
  std::istringstream twoTokens("1 2\n");
  CHECK_THROWS_AS(readLabelFile(twoTokens, 1), ParseError);
  std::istringstream junk("zebra\n");
  CHECK_THROWS_AS(readLabelFile(junk, 1), ParseError);
}

TEST_CASE("makeDataset pairs features with labels") {
  std::istringstream in("1:1\n1:2\n");
  FeatureSet fs = readFeatureFile(in, 1);
  Dataset d = makeDataset(std::move(fs), DenseVector{1.0, -1.0});
  CHECK(d.numExamples() == 2);
  CHECK(d.labels[1] == -1.0);
  REQUIRE(d.examples[0].label.has_value());
  CHECK(*d.examples[0].label == 1.0);

  std::istringstream in2("1:1\n");
  CHECK_THROWS_AS(makeDataset(readFeatureFile(in2, 1), DenseVector{1.0, 2.0}),
                  DimensionMismatch);
}

TEST_CASE("missing files raise IoError") {
  CHECK_THROWS_AS(readLibSVM("/nonexistent/convopt.svm", 1), IoError);
  CHECK_THROWS_AS(readFeatureFile("/nonexistent/convopt.feat", 1), IoError);
  CHECK_THROWS_AS(readLabelFile("/nonexistent/convopt.label", 1), IoError);
}

TEST_CASE("path round trip through a real file") {
  TempFile f("roundtrip", "1 1:0.5\n-1 2:-1\n");
  Dataset d = readLibSVM(f.path(), 1);
  TempFile g("roundtrip_out", "");
  writeLibSVM(d, g.path(), 1);
  Dataset d2 = readLibSVM(g.path(), 1);
  CHECK(d2.numExamples() == 2);
  CHECK(d2.labels == d.labels);
}

TEST_SUITE_END();
