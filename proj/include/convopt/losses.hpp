#ifndef CONVOPT_LOSSES_HPP
#define CONVOPT_LOSSES_HPP

#include <ostream>
#include <span>
#include <vector>

#include "convopt/dataio.hpp"
#include "convopt/linalg.hpp"

namespace convopt {

enum class LossKind {
  LeastSquares,  // 0.5 * (z - y)^2
  Logistic,      // log(1 + exp(-y z))
  Probit,        // -log Phi(y z)
  HingeSVM,      // max(0, 1 - y z)
  SmoothSVM,     // max(0, 1 - y z)^2
  HuberSVM,      // quadratically smoothed hinge
  HingeSVR,      // max(0, |z - y| - eps)
  SmoothSVR,     // max(0, |z - y| - eps)^2
};

enum class Regularizer { L1, L2 };

const char* toString(LossKind kind);
const char* toString(Regularizer reg);

inline std::ostream& operator<<(std::ostream& os, LossKind kind) { return os << toString(kind); }
inline std::ostream& operator<<(std::ostream& os, Regularizer reg) { return os << toString(reg); }

// Classification losses need labels in {-1,+1}; the rest take any real y.
bool isClassificationLoss(LossKind kind);

// Kinds with a (generalized) Hessian usable for Hessian-vector products.
bool supportsHessianVectorProduct(LossKind kind);

// Anything a batch solver can minimize: value plus (sub)gradient, and
// optionally Hessian-vector products for the Newton-type solvers.
class DifferentiableFunction {
 public:
  virtual ~DifferentiableFunction() = default;

  virtual int dimension() const = 0;

  // Fills f with the objective value and g with a (sub)gradient at w.
  virtual void eval(const DenseVector& w, double& f, DenseVector& g) const = 0;

  virtual bool hasHessianVectorProduct() const { return false; }

  // H(w) * v. Throws UnsupportedOperation unless hasHessianVectorProduct().
  virtual DenseVector hessianVectorProduct(const DenseVector& w, const DenseVector& v) const;
};

struct LossOptions {
  double huberThreshold = 0.5;  // half-width of the smoothed hinge corner
  double svrEpsilon = 0.1;      // insensitive-tube radius for the SVR losses
};

// sum_i loss(w . x_i, y_i) + lambda * R(w), with R = ||w||_1 or 0.5*||w||^2.
// The data term is the plain sum over examples, not an average; lambda
// multiplies only the regularizer. (LIBLINEAR-style tools put the constant
// on the data term instead; C = 1/lambda converts between the two.)
//
// Subgradient conventions at the nonsmooth points: hinge kinks contribute 0,
// and the L1 term contributes 0 at w_j == 0, so g there is the data-term
// partial alone.
class RegularizedLoss final : public DifferentiableFunction {
 public:
  RegularizedLoss(const Dataset& data, LossKind kind, Regularizer reg, double lambda,
                  LossOptions options = {});

  int dimension() const override { return data_->numFeatures; }
  void eval(const DenseVector& w, double& f, DenseVector& g) const override;
  bool hasHessianVectorProduct() const override;
  DenseVector hessianVectorProduct(const DenseVector& w, const DenseVector& v) const override;

  // Data term only, no regularizer. The stochastic solvers assemble their
  // updates from these pieces.
  double dataValue(const DenseVector& w) const;
  void dataEval(const DenseVector& w, double& f, DenseVector& g) const;
  void dataGradient(const DenseVector& w, DenseVector& g) const;
  // g is overwritten with sum of the per-example gradients over `indices`.
  void dataSubsetGradient(const DenseVector& w, std::span<const int> indices,
                          DenseVector& g) const;
  // d such that the gradient of example i's term is d * x_i.
  double exampleGradientScale(const DenseVector& w, int i) const;

  // g += scale * lambda * dR(w). The L1 subgradient is 0 at w_j == 0.
  void addRegularizerGradient(const DenseVector& w, double scale, DenseVector& g) const;
  double regularizerValue(const DenseVector& w) const;

  const Dataset& data() const { return *data_; }
  LossKind kind() const { return kind_; }
  Regularizer regularizer() const { return reg_; }
  double lambda() const { return lambda_; }
  const LossOptions& options() const { return options_; }

 private:
  void checkDimension(const DenseVector& w) const;

  const Dataset* data_;
  LossKind kind_;
  Regularizer reg_;
  double lambda_;
  LossOptions options_;
};

// Midpoint convexity probe: f((a+b)/2) <= (f(a)+f(b))/2 up to rounding
// slack 1e-9 * (1 + |f(a)| + |f(b)|).
bool convexMidpointCheck(const DifferentiableFunction& f, const DenseVector& a,
                         const DenseVector& b);

}  // namespace convopt

#endif  // CONVOPT_LOSSES_HPP
