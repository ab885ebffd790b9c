#include "convopt/losses.hpp"

#include <cmath>
#include <string>

#include "convopt/errors.hpp"

namespace convopt {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5*log(2*pi)

// log(1 + exp(-t)) without overflow for large |t|.
double logisticTerm(double t) {
  return std::log1p(std::exp(-std::fabs(t))) + std::max(0.0, -t);
}

double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  double e = std::exp(t);
  return e / (1.0 + e);
}

// Asymptotic expansion of Phi(z) * (-z) / phi(z) for z << 0.
double millsSeries(double z) {
  double z2 = z * z;
  return 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2) +
         105.0 / (z2 * z2 * z2 * z2);
}

// log Phi(z), stable over the whole line: erfc carries the tail down to
// z = -8, and below that the standard asymptotic series takes over.
double logNormalCdf(double z) {
  if (z >= -8.0) return std::log(0.5 * std::erfc(-z / std::sqrt(2.0)));
  return -0.5 * z * z - kHalfLog2Pi - std::log(-z) + std::log(millsSeries(z));
}

// Inverse Mills ratio phi(z) / Phi(z), evaluated in log space so the huge
// negative tail stays finite.
double millsRatio(double z) {
  if (z >= -8.0) return std::exp(-0.5 * z * z - kHalfLog2Pi - logNormalCdf(z));
  return -z / millsSeries(z);
}

struct TermEval {
  double value;
  double slope;  // d(term)/dz
};

TermEval evalTerm(LossKind kind, const LossOptions& o, double z, double y) {
  switch (kind) {
    case LossKind::LeastSquares: {
      double r = z - y;
      return {0.5 * r * r, r};
    }
    case LossKind::Logistic: {
      double t = y * z;
      return {logisticTerm(t), -y * sigmoid(-t)};
    }
    case LossKind::Probit: {
      double t = y * z;
      return {-logNormalCdf(t), -y * millsRatio(t)};
    }
    case LossKind::HingeSVM: {
      double t = y * z;
      if (t < 1.0) return {1.0 - t, -y};
      return {0.0, 0.0};  // the kink at t == 1 contributes 0
    }
    case LossKind::SmoothSVM: {
      double t = y * z;
      if (t < 1.0) {
        double u = 1.0 - t;
        return {u * u, -2.0 * u * y};
      }
      return {0.0, 0.0};
    }
    case LossKind::HuberSVM: {
      double u = 1.0 - y * z;
      double h = o.huberThreshold;
      if (u <= -h) return {0.0, 0.0};
      if (u >= h) return {u, -y};
      double q = u + h;
      return {q * q / (4.0 * h), -y * q / (2.0 * h)};
    }
    case LossKind::HingeSVR: {
      double r = z - y;
      double a = std::fabs(r) - o.svrEpsilon;
      if (a > 0.0) return {a, r > 0.0 ? 1.0 : -1.0};
      return {0.0, 0.0};  // inside the tube, and 0 at the kink
    }
    case LossKind::SmoothSVR: {
      double r = z - y;
      double a = std::fabs(r) - o.svrEpsilon;
      if (a > 0.0) return {a * a, r > 0.0 ? 2.0 * a : -2.0 * a};
      return {0.0, 0.0};
    }
  }
  return {0.0, 0.0};  // unreachable
}

// Scalar weight d_i in H_data = sum_i d_i x_i x_i^T, for the kinds that
// support Hessian-vector products.
double curvatureTerm(LossKind kind, const LossOptions& o, double z, double y) {
  switch (kind) {
    case LossKind::LeastSquares:
      return 1.0;
    case LossKind::Logistic: {
      double s = sigmoid(y * z);
      return s * (1.0 - s);
    }
    case LossKind::SmoothSVM:
      return y * z < 1.0 ? 2.0 : 0.0;
    case LossKind::SmoothSVR:
      return std::fabs(z - y) > o.svrEpsilon ? 2.0 : 0.0;
    default:
      return 0.0;
  }
}

}  // namespace

const char* toString(LossKind kind) {
  switch (kind) {
    case LossKind::LeastSquares: return "leastSquares";
    case LossKind::Logistic: return "logistic";
    case LossKind::Probit: return "probit";
    case LossKind::HingeSVM: return "hingeSVM";
    case LossKind::SmoothSVM: return "smoothSVM";
    case LossKind::HuberSVM: return "huberSVM";
    case LossKind::HingeSVR: return "hingeSVR";
    case LossKind::SmoothSVR: return "smoothSVR";
  }
  return "?";
}

const char* toString(Regularizer reg) { return reg == Regularizer::L1 ? "L1" : "L2"; }

bool isClassificationLoss(LossKind kind) {
  switch (kind) {
    case LossKind::Logistic:
    case LossKind::Probit:
    case LossKind::HingeSVM:
    case LossKind::SmoothSVM:
    case LossKind::HuberSVM:
      return true;
    default:
      return false;
  }
}

bool supportsHessianVectorProduct(LossKind kind) {
  switch (kind) {
    case LossKind::LeastSquares:
    case LossKind::Logistic:
    case LossKind::SmoothSVM:
    case LossKind::SmoothSVR:
      return true;
    default:
      return false;
  }
}

DenseVector DifferentiableFunction::hessianVectorProduct(const DenseVector&,
                                                         const DenseVector&) const {
  throw UnsupportedOperation("this function has no Hessian-vector product");
}

RegularizedLoss::RegularizedLoss(const Dataset& data, LossKind kind, Regularizer reg,
                                 double lambda, LossOptions options)
    : data_(&data), kind_(kind), reg_(reg), lambda_(lambda), options_(options) {
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (!(options.huberThreshold > 0.0)) throw ConfigError("huberThreshold must be > 0");
  if (!(options.svrEpsilon >= 0.0)) throw ConfigError("svrEpsilon must be >= 0");
  if (data.labels.size() != data.examples.size())
    throw DimensionMismatch("dataset has " + std::to_string(data.examples.size()) +
                            " examples but " + std::to_string(data.labels.size()) + " labels");
  if (isClassificationLoss(kind)) {
    for (double y : data.labels)
      if (y != 1.0 && y != -1.0)
        throw ConfigError(std::string(toString(kind)) +
                          " requires labels in {-1,+1}, got " + formatDouble(y));
  }
}

void RegularizedLoss::checkDimension(const DenseVector& w) const {
  if (static_cast<int>(w.size()) != data_->numFeatures)
    throw DimensionMismatch("weight vector has length " + std::to_string(w.size()) +
                            ", dataset has " + std::to_string(data_->numFeatures) +
                            " features");
}

void RegularizedLoss::dataEval(const DenseVector& w, double& f, DenseVector& g) const {
  checkDimension(w);
  f = 0.0;
  g.assign(w.size(), 0.0);
  for (int i = 0; i < data_->numExamples(); ++i) {
    const SparseExample& x = data_->examples[static_cast<std::size_t>(i)];
    double z = dot(w, x);
    TermEval te = evalTerm(kind_, options_, z, data_->labels[static_cast<std::size_t>(i)]);
    f += te.value;
    if (te.slope != 0.0) addScaled(g, te.slope, x);
  }
}

void RegularizedLoss::eval(const DenseVector& w, double& f, DenseVector& g) const {
  dataEval(w, f, g);
  f += regularizerValue(w);
  addRegularizerGradient(w, 1.0, g);
}

double RegularizedLoss::dataValue(const DenseVector& w) const {
  checkDimension(w);
  double f = 0.0;
  for (int i = 0; i < data_->numExamples(); ++i) {
    double z = dot(w, data_->examples[static_cast<std::size_t>(i)]);
    f += evalTerm(kind_, options_, z, data_->labels[static_cast<std::size_t>(i)]).value;
  }
  return f;
}

void RegularizedLoss::dataGradient(const DenseVector& w, DenseVector& g) const {
  checkDimension(w);
  g.assign(w.size(), 0.0);
  for (int i = 0; i < data_->numExamples(); ++i) {
    const SparseExample& x = data_->examples[static_cast<std::size_t>(i)];
    double z = dot(w, x);
    TermEval te = evalTerm(kind_, options_, z, data_->labels[static_cast<std::size_t>(i)]);
    if (te.slope != 0.0) addScaled(g, te.slope, x);
  }
}

void RegularizedLoss::dataSubsetGradient(const DenseVector& w, std::span<const int> indices,
                                         DenseVector& g) const {
  checkDimension(w);
  g.assign(w.size(), 0.0);
  for (int i : indices) {
    if (i < 0 || i >= data_->numExamples())
      throw DimensionMismatch("example index " + std::to_string(i) + " out of range");
    const SparseExample& x = data_->examples[static_cast<std::size_t>(i)];
    double z = dot(w, x);
    TermEval te = evalTerm(kind_, options_, z, data_->labels[static_cast<std::size_t>(i)]);
    if (te.slope != 0.0) addScaled(g, te.slope, x);
  }
}

double RegularizedLoss::exampleGradientScale(const DenseVector& w, int i) const {
  checkDimension(w);
  if (i < 0 || i >= data_->numExamples())
    throw DimensionMismatch("example index " + std::to_string(i) + " out of range");
  double z = dot(w, data_->examples[static_cast<std::size_t>(i)]);
  return evalTerm(kind_, options_, z, data_->labels[static_cast<std::size_t>(i)]).slope;
}

void RegularizedLoss::addRegularizerGradient(const DenseVector& w, double scale,
                                             DenseVector& g) const {
  if (g.size() != w.size())
    throw DimensionMismatch("gradient buffer length does not match weight length");
  double c = scale * lambda_;
  if (c == 0.0) return;
  if (reg_ == Regularizer::L2) {
    for (std::size_t j = 0; j < w.size(); ++j) g[j] += c * w[j];
  } else {
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (w[j] > 0.0)
        g[j] += c;
      else if (w[j] < 0.0)
        g[j] -= c;
      // at w_j == 0 the subgradient term is 0
    }
  }
}

double RegularizedLoss::regularizerValue(const DenseVector& w) const {
  if (reg_ == Regularizer::L2) {
    double s = 0.0;
    for (double v : w) s += v * v;
    return lambda_ * 0.5 * s;
  }
  return lambda_ * l1Norm(w);
}

bool RegularizedLoss::hasHessianVectorProduct() const {
  return supportsHessianVectorProduct(kind_) && reg_ == Regularizer::L2;
}

DenseVector RegularizedLoss::hessianVectorProduct(const DenseVector& w,
                                                  const DenseVector& v) const {
  if (!hasHessianVectorProduct())
    throw UnsupportedOperation(std::string("no Hessian-vector product for ") +
                               toString(kind_) + " with " + toString(reg_) +
                               " regularizer");
  checkDimension(w);
  if (v.size() != w.size())
    throw DimensionMismatch("hessianVectorProduct: vector length does not match weights");
  DenseVector hv(w.size(), 0.0);
  for (int i = 0; i < data_->numExamples(); ++i) {
    const SparseExample& x = data_->examples[static_cast<std::size_t>(i)];
    double z = dot(w, x);
    double c = curvatureTerm(kind_, options_, z, data_->labels[static_cast<std::size_t>(i)]);
    if (c == 0.0) continue;
    double xv = dot(v, x);
    if (xv != 0.0) addScaled(hv, c * xv, x);
  }
  for (std::size_t j = 0; j < v.size(); ++j) hv[j] += lambda_ * v[j];
  return hv;
}

bool convexMidpointCheck(const DifferentiableFunction& f, const DenseVector& a,
                         const DenseVector& b) {
  if (a.size() != b.size())
    throw DimensionMismatch("convexMidpointCheck: endpoint lengths differ");
  DenseVector mid(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) mid[j] = 0.5 * (a[j] + b[j]);
  double fa = 0.0, fb = 0.0, fm = 0.0;
  DenseVector g;
  f.eval(a, fa, g);
  f.eval(b, fb, g);
  f.eval(mid, fm, g);
  double slack = 1e-9 * (1.0 + std::fabs(fa) + std::fabs(fb));
  return fm <= 0.5 * (fa + fb) + slack;
}

}  // namespace convopt
