#include "convopt/dual_opt.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "convopt/batch_opt.hpp"
#include "convopt/errors.hpp"
#include "convopt/losses.hpp"
#include "doctest.h"
#include "support/test_util.hpp"

using namespace convopt;
using namespace convopt::testsupport;

namespace {

// The dual objective being ascended: sum alpha - 0.5 ||w||^2 - 0.5 D sum alpha^2.
double dualObjective(const std::vector<double>& alpha, const DenseVector& w, double diag) {
  double sumA = 0.0, sumA2 = 0.0;
  for (double a : alpha) {
    sumA += a;
    sumA2 += a * a;
  }
  return sumA - 0.5 * dot(w, w) - 0.5 * diag * sumA2;
}

}  // namespace

TEST_SUITE_BEGIN("dual_opt");

TEST_CASE("argument validation") {
  Dataset d = DatasetBuilder(1).add({{0, 1.0}}, 1.0).build();
  CHECK_THROWS_AS(svcDual(d, SvmKind::L1Svm, 0.0, 1e-3, 10, 1), ConfigError);
  CHECK_THROWS_AS(svcDual(d, SvmKind::L1Svm, 1.0, 0.0, 10, 1), ConfigError);
  CHECK_THROWS_AS(svcDual(d, SvmKind::L1Svm, 1.0, 1e-3, 0, 1), ConfigError);

  Dataset empty;
  empty.numFeatures = 1;
  CHECK_THROWS_AS(svcDual(empty, SvmKind::L1Svm, 1.0, 1e-3, 10, 1), ConfigError);

  Dataset badLabels = DatasetBuilder(1).add({{0, 1.0}}, 2.0).build();
  CHECK_THROWS_AS(svcDual(badLabels, SvmKind::L1Svm, 1.0, 1e-3, 10, 1), ConfigError);
}

TEST_CASE("single-example hinge dual in closed form") {
  // One example x = (2), y = +1, C = 1: the dual maximum is at
  // alpha = min(C, 1 / x'x) = 1/4, reached in a single update.
  Dataset d = DatasetBuilder(1).add({{0, 2.0}}, 1.0).build();
  std::vector<double> lastAlpha;
  SolverResult r = svcDual(d, SvmKind::L1Svm, 1.0, 1e-10, 50, 1,
                           [&](int, const std::vector<double>& a, const DenseVector&) {
                             lastAlpha = a;
                           });
  CHECK(r.terminated == Termination::Converged);
  REQUIRE(lastAlpha.size() == 1);
  CHECK(std::fabs(lastAlpha[0] - 0.25) <= 1e-10);
  CHECK(std::fabs(r.w[0] - 0.5) <= 1e-10);
  CHECK(std::fabs(r.f - 0.125) <= 1e-10);  // margin 1: pure 0.5 ||w||^2
  CHECK(r.evaluations == 2);               // the second epoch only verifies
}

TEST_CASE("the box constraint caps the hinge dual") {
  // x = (1), C = 0.3: the unconstrained step 1/x'x = 1 is clipped to C.
  Dataset d = DatasetBuilder(1).add({{0, 1.0}}, 1.0).build();
  std::vector<double> lastAlpha;
  SolverResult r = svcDual(d, SvmKind::L1Svm, 0.3, 1e-10, 50, 1,
                           [&](int, const std::vector<double>& a, const DenseVector&) {
                             lastAlpha = a;
                           });
  CHECK(r.terminated == Termination::Converged);
  CHECK(lastAlpha[0] == 0.3);
  CHECK(r.w[0] == 0.3);
  CHECK(std::fabs(r.f - (0.3 * 0.7 + 0.045)) <= 1e-12);
}

TEST_CASE("single-example squared-hinge dual in closed form") {
  // With D = 1/(2C) the optimum is alpha = 1 / (x'x + D), no upper bound.
  Dataset d = DatasetBuilder(1).add({{0, 2.0}}, 1.0).build();
  std::vector<double> lastAlpha;
  SolverResult r = svcDual(d, SvmKind::L2Svm, 1.0, 1e-10, 50, 1,
                           [&](int, const std::vector<double>& a, const DenseVector&) {
                             lastAlpha = a;
                           });
  CHECK(r.terminated == Termination::Converged);
  CHECK(std::fabs(lastAlpha[0] - 1.0 / 4.5) <= 1e-10);
  CHECK(std::fabs(r.w[0] - 2.0 / 4.5) <= 1e-10);
}

TEST_CASE("iterates stay in the box, keep w in sync, and ascend the dual") {
  Dataset d = gaussianBlobs(30, 3, 0.6, 0.5, 91);
  for (SvmKind kind : {SvmKind::L1Svm, SvmKind::L2Svm}) {
    CAPTURE(kind == SvmKind::L1Svm ? "L1Svm" : "L2Svm");
    double C = 0.5;
    double diag = kind == SvmKind::L1Svm ? 0.0 : 1.0 / (2.0 * C);
    double upper = kind == SvmKind::L1Svm ? C : std::numeric_limits<double>::infinity();
    double lastDual = -std::numeric_limits<double>::infinity();
    int epochsSeen = 0;
    SolverResult r = svcDual(
        d, kind, C, 1e-8, 300, 5,
        [&](int epoch, const std::vector<double>& alpha, const DenseVector& w) {
          CHECK(epoch == epochsSeen);
          ++epochsSeen;
          DenseVector rebuilt(3, 0.0);
          for (std::size_t i = 0; i < alpha.size(); ++i) {
            CHECK(alpha[i] >= 0.0);
            CHECK(alpha[i] <= upper);
            addScaled(rebuilt, alpha[i] * d.labels[i], d.examples[i]);
          }
          for (std::size_t j = 0; j < rebuilt.size(); ++j)
            CHECK(std::fabs(rebuilt[j] - w[j]) <= 1e-10);
          double dual = dualObjective(alpha, w, diag);
          CHECK(dual >= lastDual - 1e-9 * (1.0 + std::fabs(dual)));
          lastDual = dual;
        });
    CHECK(r.terminated == Termination::Converged);
    CHECK(r.evaluations == epochsSeen);
    CHECK(static_cast<int>(r.trace.size()) == epochsSeen);
    CHECK(r.trace.back().f == r.f);
  }
}

TEST_CASE("the dual solution matches the primal squared-hinge solve") {
  Dataset d = gaussianBlobs(60, 3, 0.8, 0.4, 101);
  double lambda = 0.5;
  SolverResult dual = svcDual(d, SvmKind::L2Svm, 1.0 / lambda, 1e-9, 3000, 3);

  RegularizedLoss primal(d, LossKind::SmoothSVM, Regularizer::L2, lambda);
  SolverConfig cfg;
  cfg.tol = 1e-9;
  cfg.maxEval = 2000;
  SolverResult batch = lbfgsMin(primal, DenseVector(3, 0.0), cfg);

  // same objective once the C-scaled value is brought to the lambda scale
  CHECK(relDiff(lambda * dual.f, batch.f) <= 1e-4);
  // and identical predictions on every training point
  for (int i = 0; i < d.numExamples(); ++i) {
    double sDual = dot(dual.w, d.examples[i]);
    double sBatch = dot(batch.w, d.examples[i]);
    CHECK((sDual >= 0.0) == (sBatch >= 0.0));
  }
}

TEST_CASE("examples with no features are skipped") {
  Dataset d = DatasetBuilder(2)
                  .add({{0, 2.0}, {1, 1.0}}, 1.0)
                  .add({}, -1.0)  // empty: x'x == 0, no update possible
                  .add({{0, -1.0}, {1, -2.0}}, -1.0)
                  .build();
  std::vector<double> lastAlpha;
  SolverResult r = svcDual(d, SvmKind::L1Svm, 1.0, 1e-8, 200, 1,
                           [&](int, const std::vector<double>& a, const DenseVector&) {
                             lastAlpha = a;
                           });
  CHECK(r.terminated == Termination::Converged);
  CHECK(lastAlpha[1] == 0.0);
  for (double v : r.w) CHECK(std::isfinite(v));
}

TEST_CASE("seeded visit orders reproduce bit for bit") {
  Dataset d = gaussianBlobs(20, 3, 0.6, 0.5, 111);
  SolverResult a = svcDual(d, SvmKind::L1Svm, 1.0, 1e-8, 100, 9);
  SolverResult b = svcDual(d, SvmKind::L1Svm, 1.0, 1e-8, 100, 9);
  CHECK(a.w == b.w);
  CHECK(a.f == b.f);
  CHECK(a.evaluations == b.evaluations);

  // one epoch under different orders visits the data differently
  SolverResult c1 = svcDual(d, SvmKind::L1Svm, 1.0, 1e-12, 1, 9);
  SolverResult c2 = svcDual(d, SvmKind::L1Svm, 1.0, 1e-12, 1, 10);
  CHECK(c1.w != c2.w);
}

TEST_SUITE_END();
