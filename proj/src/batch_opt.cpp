#include "convopt/batch_opt.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "convopt/errors.hpp"

namespace convopt {

namespace {

constexpr double kMinStep = 1e-20;       // line search gives up below this
constexpr double kCurvatureFloor = 1e-10;  // s'y must exceed this to store a pair

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void logIteration(const SolverConfig& cfg, const char* solver, int iter, double f,
                  double gnorm, int evals) {
  if (cfg.verbosity >= 2)
    std::fprintf(stderr, "%s iter %d f %.10g |g| %.4g evals %d\n", solver, iter, f, gnorm,
                 evals);
}

// Counts objective evaluations against the budget and keeps the
// accepted-iterate trace.
struct Tracker {
  Tracker(const DifferentiableFunction& f, int budgetIn) : fn(f), budget(budgetIn) {}

  const DifferentiableFunction& fn;
  int budget;
  int count = 0;
  std::vector<TracePoint> trace;

  bool canEval() const { return count < budget; }

  void eval(const DenseVector& x, double& f, DenseVector& g) {
    fn.eval(x, f, g);
    ++count;
  }

  void record(double f) { trace.push_back({count, f}); }

  SolverResult finish(DenseVector w, double f, Termination t) {
    SolverResult r;
    r.w = std::move(w);
    r.f = f;
    r.evaluations = count;
    r.terminated = t;
    r.trace = std::move(trace);
    return r;
  }
};

enum class LineSearchStatus { Accepted, Failed, OutOfBudget };

// Armijo backtracking from `base` along d, halving t from `seed` until
// f(base + t d) <= fBase + gamma t g'd. On acceptance x/f/g hold the new
// point. A NaN trial value fails the test and keeps halving.
LineSearchStatus armijoBacktrack(Tracker& tr, const DenseVector& base, double fBase,
                                 double gDotD, const DenseVector& d, double seed,
                                 double gamma, DenseVector& x, double& f, DenseVector& g) {
  double t = seed;
  for (;;) {
    if (!tr.canEval()) return LineSearchStatus::OutOfBudget;
    x = base;
    multiplyAccumulate(x, -t, d);  // x = base + t d
    tr.eval(x, f, g);
    if (f <= fBase + gamma * t * gDotD) return LineSearchStatus::Accepted;
    t *= 0.5;
    if (t < kMinStep) return LineSearchStatus::Failed;
  }
}

Termination finalTermination(double gnorm, double tol) {
  return gnorm < tol ? Termination::Converged : Termination::BudgetExhausted;
}

struct HistoryPair {
  DenseVector s;
  DenseVector y;
  double sy;
};

// Two-loop recursion returning d = -H g, with H0 scaled by the newest
// pair's s'y / y'y. Empty history gives plain steepest descent.
DenseVector lbfgsDirection(const std::deque<HistoryPair>& history, const DenseVector& g) {
  DenseVector q = g;
  if (history.empty()) {
    scale(q, -1.0);
    return q;
  }
  std::vector<double> alpha(history.size());
  for (int i = static_cast<int>(history.size()) - 1; i >= 0; --i) {
    const HistoryPair& h = history[static_cast<std::size_t>(i)];
    alpha[static_cast<std::size_t>(i)] = dot(h.s, q) / h.sy;
    multiplyAccumulate(q, alpha[static_cast<std::size_t>(i)], h.y);
  }
  const HistoryPair& newest = history.back();
  scale(q, newest.sy / dot(newest.y, newest.y));
  for (std::size_t i = 0; i < history.size(); ++i) {
    const HistoryPair& h = history[i];
    double beta = dot(h.y, q) / h.sy;
    multiplyAccumulate(q, beta - alpha[i], h.s);  // q += (alpha - beta) s
  }
  scale(q, -1.0);
  return q;
}

void pushHistory(std::deque<HistoryPair>& history, int memory, const DenseVector& xNew,
                 const DenseVector& x, const DenseVector& gNew, const DenseVector& g) {
  DenseVector s(x.size()), y(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    s[j] = xNew[j] - x[j];
    y[j] = gNew[j] - g[j];
  }
  double sy = dot(s, y);
  if (sy <= kCurvatureFloor) return;  // skip pairs with no usable curvature
  history.push_back({std::move(s), std::move(y), sy});
  while (static_cast<int>(history.size()) > memory) history.pop_front();
}

}  // namespace

void validate(const SolverConfig& cfg) {
  if (!(cfg.alpha > 0.0)) throw ConfigError("alpha must be > 0");
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) throw ConfigError("gamma must be in (0, 1)");
  if (cfg.maxEval < 1) throw ConfigError("maxEval must be >= 1");
  if (!(cfg.tol > 0.0)) throw ConfigError("tol must be > 0");
  if (cfg.memory < 1) throw ConfigError("memory must be >= 1");
}

SolverResult gd(const DifferentiableFunction& c, const DenseVector& x0,
                const SolverConfig& cfg) {
  validate(cfg);
  Tracker tr(c, cfg.maxEval);
  DenseVector x = x0;
  DenseVector g;
  double f = 0.0;
  tr.eval(x, f, g);
  tr.record(f);
  double gnorm = norm(g);
  int iter = 0;
  while (gnorm >= cfg.tol && tr.canEval()) {
    multiplyAccumulate(x, cfg.alpha, g);
    tr.eval(x, f, g);
    tr.record(f);
    gnorm = norm(g);
    logIteration(cfg, "gd", ++iter, f, gnorm, tr.count);
  }
  return tr.finish(std::move(x), f, finalTermination(gnorm, cfg.tol));
}

SolverResult gdLineSearch(const DifferentiableFunction& c, const DenseVector& x0,
                          const SolverConfig& cfg) {
  validate(cfg);
  Tracker tr(c, cfg.maxEval);
  DenseVector x = x0;
  DenseVector g;
  double f = 0.0;
  tr.eval(x, f, g);
  tr.record(f);
  double gnorm = norm(g);
  DenseVector d, xNew, gNew;
  double fNew = 0.0;
  int iter = 0;
  while (gnorm >= cfg.tol && tr.canEval()) {
    d = g;
    scale(d, -1.0);
    LineSearchStatus st = armijoBacktrack(tr, x, f, -gnorm * gnorm, d, cfg.alpha, cfg.gamma,
                                          xNew, fNew, gNew);
    if (st == LineSearchStatus::Failed)
      return tr.finish(std::move(x), f, Termination::LineSearchFailed);
    if (st == LineSearchStatus::OutOfBudget) break;
    x.swap(xNew);
    f = fNew;
    g.swap(gNew);
    tr.record(f);
    gnorm = norm(g);
    logIteration(cfg, "gdLineSearch", ++iter, f, gnorm, tr.count);
  }
  return tr.finish(std::move(x), f, finalTermination(gnorm, cfg.tol));
}

SolverResult gdBarzilaiBorwein(const DifferentiableFunction& c, const DenseVector& x0,
                               const SolverConfig& cfg) {
  validate(cfg);
  Tracker tr(c, cfg.maxEval);
  DenseVector x = x0;
  DenseVector g;
  double f = 0.0;
  tr.eval(x, f, g);
  tr.record(f);
  double gnorm = norm(g);
  DenseVector xPrev, gPrev, d, xNew, gNew;
  double fNew = 0.0;
  bool havePrev = false;
  int iter = 0;
  while (gnorm >= cfg.tol && tr.canEval()) {
    // Spectral step s's / s'y from the last accepted move, clamped to a
    // sane range; fall back to cfg.alpha when the curvature is unusable.
    double seed = cfg.alpha;
    if (havePrev) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        double sj = x[j] - xPrev[j];
        ss += sj * sj;
        sy += sj * (g[j] - gPrev[j]);
      }
      if (sy > 0.0) seed = std::min(std::max(ss / sy, 1e-10), 1e10);
    }
    d = g;
    scale(d, -1.0);
    LineSearchStatus st =
        armijoBacktrack(tr, x, f, -gnorm * gnorm, d, seed, cfg.gamma, xNew, fNew, gNew);
    if (st == LineSearchStatus::Failed)
      return tr.finish(std::move(x), f, Termination::LineSearchFailed);
    if (st == LineSearchStatus::OutOfBudget) break;
    xPrev = x;
    gPrev = g;
    havePrev = true;
    x.swap(xNew);
    f = fNew;
    g.swap(gNew);
    tr.record(f);
    gnorm = norm(g);
    logIteration(cfg, "gdBarzilaiBorwein", ++iter, f, gnorm, tr.count);
  }
  return tr.finish(std::move(x), f, finalTermination(gnorm, cfg.tol));
}

SolverResult gdNesterov(const DifferentiableFunction& c, const DenseVector& x0,
                        const SolverConfig& cfg) {
  validate(cfg);
  Tracker tr(c, cfg.maxEval);
  DenseVector x = x0;
  DenseVector g;
  double f = 0.0;
  tr.eval(x, f, g);
  tr.record(f);
  double gnorm = norm(g);
  DenseVector xPrev = x;
  DenseVector y, gy, d, xNew, gNew;
  double fy = 0.0, fNew = 0.0;
  int k = 1;
  while (gnorm >= cfg.tol && tr.canEval()) {
    double coef = (k - 1.0) / (k + 2.0);
    const DenseVector* base = &x;
    double fBase = f;
    const DenseVector* gBase = &g;
    if (k > 1) {  // at k == 1 the momentum point is x itself; reuse its eval
      y = x;
      for (std::size_t j = 0; j < x.size(); ++j) y[j] += coef * (x[j] - xPrev[j]);
      if (!tr.canEval()) break;
      tr.eval(y, fy, gy);
      base = &y;
      fBase = fy;
      gBase = &gy;
    }
    d = *gBase;
    scale(d, -1.0);
    LineSearchStatus st = armijoBacktrack(tr, *base, fBase, -dot(*gBase, *gBase), d,
                                          cfg.alpha, cfg.gamma, xNew, fNew, gNew);
    if (st == LineSearchStatus::Failed)
      return tr.finish(std::move(x), f, Termination::LineSearchFailed);
    if (st == LineSearchStatus::OutOfBudget) break;
    xPrev = x;
    x = xNew;
    double fPrev = f;
    f = fNew;
    g.swap(gNew);
    tr.record(f);
    gnorm = norm(g);
    logIteration(cfg, "gdNesterov", k, f, gnorm, tr.count);
    // the search only guarantees decrease from the momentum point; if the
    // accepted step still went uphill overall, the momentum has overshot,
    // so restart it (the next step is then plain steepest descent)
    k = f > fPrev ? 1 : k + 1;
  }
  return tr.finish(std::move(x), f, finalTermination(gnorm, cfg.tol));
}

SolverResult lbfgsMin(const DifferentiableFunction& c, const DenseVector& x0,
                      const SolverConfig& cfg) {
  validate(cfg);
  Tracker tr(c, cfg.maxEval);
  DenseVector x = x0;
  DenseVector g;
  double f = 0.0;
  tr.eval(x, f, g);
  tr.record(f);
  double gnorm = norm(g);
  std::deque<HistoryPair> history;
  DenseVector d, xNew, gNew;
  double fNew = 0.0;
  int iter = 0;
  while (gnorm >= cfg.tol && tr.canEval()) {
    d = lbfgsDirection(history, g);
    double gDotD = dot(g, d);
    if (gDotD >= 0.0) {  // not a descent direction: drop history, restart
      history.clear();
      d = g;
      scale(d, -1.0);
      gDotD = -gnorm * gnorm;
    }
    LineSearchStatus st =
        armijoBacktrack(tr, x, f, gDotD, d, 1.0, cfg.gamma, xNew, fNew, gNew);
    if (st == LineSearchStatus::Failed)
      return tr.finish(std::move(x), f, Termination::LineSearchFailed);
    if (st == LineSearchStatus::OutOfBudget) break;
    pushHistory(history, cfg.memory, xNew, x, gNew, g);
    x.swap(xNew);
    f = fNew;
    g.swap(gNew);
    tr.record(f);
    gnorm = norm(g);
    logIteration(cfg, "lbfgsMin", ++iter, f, gnorm, tr.count);
  }
  return tr.finish(std::move(x), f, finalTermination(gnorm, cfg.tol));
}

DenseVector owlPseudoGradient(const DenseVector& smoothGradient, const DenseVector& w,
                              double lambda) {
  if (smoothGradient.size() != w.size())
    throw DimensionMismatch("owlPseudoGradient: gradient and weight lengths differ");
  DenseVector pg(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    double gj = smoothGradient[j];
    if (w[j] > 0.0)
      pg[j] = gj + lambda;
    else if (w[j] < 0.0)
      pg[j] = gj - lambda;
    else if (gj + lambda < 0.0)
      pg[j] = gj + lambda;  // objective decreases moving right
    else if (gj - lambda > 0.0)
      pg[j] = gj - lambda;  // objective decreases moving left
    else
      pg[j] = 0.0;
  }
  return pg;
}

SolverResult lbfgsMinOwl(const RegularizedLoss& c, const DenseVector& x0,
                         const SolverConfig& cfg) {
  validate(cfg);
  if (c.regularizer() != Regularizer::L1)
    throw ConfigError("lbfgsMinOwl requires an L1-regularized loss");
  if (c.lambda() == 0.0) return lbfgsMin(c, x0, cfg);

  const double lambda = c.lambda();
  SolverResult res;
  int evals = 0;
  DenseVector x = x0;
  DenseVector gs;  // smooth (data-term) gradient
  double fs = 0.0;
  c.dataEval(x, fs, gs);
  ++evals;
  double F = fs + lambda * l1Norm(x);
  DenseVector pg = owlPseudoGradient(gs, x, lambda);
  res.trace.push_back({evals, F});
  double pgnorm = norm(pg);

  std::deque<HistoryPair> history;
  DenseVector d, xi(x.size()), xt, gst;
  double fst = 0.0;
  int iter = 0;
  Termination term = Termination::BudgetExhausted;

  while (pgnorm >= cfg.tol && evals < cfg.maxEval) {
    d = lbfgsDirection(history, pg);
    // Keep only components that agree in sign with the pseudo steepest
    // descent direction -pg.
    for (std::size_t j = 0; j < d.size(); ++j)
      if (d[j] * pg[j] > 0.0) d[j] = 0.0;
    double dDotPg = dot(d, pg);
    if (dDotPg >= 0.0) {
      history.clear();
      d = pg;
      scale(d, -1.0);
      dDotPg = -pgnorm * pgnorm;
    }
    // Orthant for this iteration: the sign of x, or of -pg where x is 0.
    for (std::size_t j = 0; j < x.size(); ++j)
      xi[j] = x[j] != 0.0 ? sgn(x[j]) : -sgn(pg[j]);

    // Backtracking with projection: any coordinate leaving its orthant is
    // clamped to exactly 0, and sufficient decrease is measured through the
    // pseudo-gradient against the point actually reached.
    double t = 1.0;
    bool accepted = false;
    bool outOfBudget = false;
    double Ft = 0.0;
    for (;;) {
      if (evals >= cfg.maxEval) {
        outOfBudget = true;
        break;
      }
      xt = x;
      for (std::size_t j = 0; j < x.size(); ++j) {
        xt[j] += t * d[j];
        if (xt[j] != 0.0 && sgn(xt[j]) != xi[j]) xt[j] = 0.0;
      }
      c.dataEval(xt, fst, gst);
      ++evals;
      Ft = fst + lambda * l1Norm(xt);
      double decrease = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) decrease += pg[j] * (xt[j] - x[j]);
      if (Ft <= F + cfg.gamma * decrease) {
        accepted = true;
        break;
      }
      t *= 0.5;
      if (t < kMinStep) break;
    }
    if (outOfBudget) break;
    if (!accepted) {
      term = Termination::LineSearchFailed;
      pgnorm = -1.0;  // suppress the converged check below
      break;
    }
    pushHistory(history, cfg.memory, xt, x, gst, gs);
    x = xt;
    gs.swap(gst);
    F = Ft;
    pg = owlPseudoGradient(gs, x, lambda);
    res.trace.push_back({evals, F});
    pgnorm = norm(pg);
    logIteration(cfg, "lbfgsMinOwl", ++iter, F, pgnorm, evals);
  }
  if (pgnorm >= 0.0 && pgnorm < cfg.tol) term = Termination::Converged;
  res.w = std::move(x);
  res.f = F;
  res.evaluations = evals;
  res.terminated = term;
  return res;
}

namespace {

// Walk from d along p to the trust-region boundary ||d + tau p|| = radius.
DenseVector toBoundary(DenseVector d, const DenseVector& p, double radius) {
  double dp = dot(d, p);
  double pp = dot(p, p);
  if (pp == 0.0) return d;
  double dd = dot(d, d);
  double disc = std::max(0.0, dp * dp + pp * (radius * radius - dd));
  double tau = (-dp + std::sqrt(disc)) / pp;
  multiplyAccumulate(d, -tau, p);  // d += tau p
  return d;
}

// Steihaug CG for min g'd + 0.5 d'Hd with ||d|| <= radius. Stops at the
// boundary, on negative curvature, or at relative residual cgTol.
DenseVector steihaugCG(const DifferentiableFunction& c, const DenseVector& x,
                       const DenseVector& g, double radius, double cgTol) {
  DenseVector d(g.size(), 0.0);
  DenseVector r = g;
  scale(r, -1.0);
  DenseVector p = r;
  double rr = dot(r, r);
  double stopTol = cgTol * std::sqrt(rr);
  int maxIters = static_cast<int>(g.size());
  for (int it = 0; it < maxIters; ++it) {
    if (std::sqrt(rr) <= stopTol) break;
    DenseVector hp = c.hessianVectorProduct(x, p);
    double pHp = dot(p, hp);
    if (pHp <= 0.0) return toBoundary(std::move(d), p, radius);
    double alpha = rr / pHp;
    DenseVector dNext = d;
    multiplyAccumulate(dNext, -alpha, p);  // d + alpha p
    if (norm(dNext) >= radius) return toBoundary(std::move(d), p, radius);
    d.swap(dNext);
    multiplyAccumulate(r, alpha, hp);  // r -= alpha Hp
    double rrNew = dot(r, r);
    double beta = rrNew / rr;
    rr = rrNew;
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = r[j] + beta * p[j];
  }
  return d;
}

}  // namespace

SolverResult tron(const DifferentiableFunction& c, const DenseVector& x0,
                  const SolverConfig& cfg, const TronOptions& opts) {
  validate(cfg);
  if (!c.hasHessianVectorProduct())
    throw UnsupportedOperation("tron needs a loss with Hessian-vector products");
  Tracker tr(c, cfg.maxEval);
  DenseVector x = x0;
  DenseVector g;
  double f = 0.0;
  tr.eval(x, f, g);
  tr.record(f);
  double gnorm = norm(g);
  double radius = gnorm;
  DenseVector xTrial, gTrial;
  double fTrial = 0.0;
  int iter = 0;
  while (gnorm >= cfg.tol && tr.canEval()) {
    DenseVector d = steihaugCG(c, x, g, radius, opts.cgTol);
    DenseVector hd = c.hessianVectorProduct(x, d);
    double predicted = -(dot(g, d) + 0.5 * dot(d, hd));
    if (!tr.canEval()) break;
    xTrial = x;
    multiplyAccumulate(xTrial, -1.0, d);  // x + d
    tr.eval(xTrial, fTrial, gTrial);
    double actual = f - fTrial;
    double snorm = norm(d);
    double rho = predicted > 0.0 ? actual / predicted : -1.0;
    if (rho < opts.eta1)
      radius = std::max(opts.sigma1 * radius, opts.sigma2 * snorm);
    else if (rho > opts.eta2)
      radius = std::max(radius, opts.sigma3 * snorm);
    if (rho > opts.eta0) {
      x.swap(xTrial);
      f = fTrial;
      g.swap(gTrial);
      tr.record(f);
      gnorm = norm(g);
      logIteration(cfg, "tron", ++iter, f, gnorm, tr.count);
    }
  }
  return tr.finish(std::move(x), f, finalTermination(gnorm, cfg.tol));
}

}  // namespace convopt
