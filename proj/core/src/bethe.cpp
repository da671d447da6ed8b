#include "permbound/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "permbound/matching.hpp"
#include "permbound/sinkhorn.hpp"

namespace permbound {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInteriorEps = 1e-12;
constexpr double kProjectionTol = 1e-13;
constexpr int kProjectionMaxIter = 20000;
constexpr double kMinStep = 1e-14;
constexpr double kMaxStep = 1e4;
// Objective changes below this (relative) are projection noise: P is only
// feasible to kProjectionTol, which moves the objective by about that much.
constexpr double kObjectiveNoise = 1e-12;

void check_gamma(double gamma) {
  if (!(gamma >= -1.0 && gamma <= 1.0)) {
    throw InputError("gamma must lie in [-1, 1], got " + std::to_string(gamma));
  }
}

// (1 - p) log(1 - p) with the 0 log 0 = 0 convention.
double one_minus_entropy_term(double p) {
  if (p >= 1.0) return 0.0;
  return (1.0 - p) * std::log1p(-p);
}

double one_minus_entropy_term(const BigRational& p) {
  BigRational q = 1 - p;
  if (q == 0) return 0.0;
  return q.get_d() * log_of(q);
}

template <Scalar T>
double entry_term(const T& a, const T& p, double gamma) {
  if (p == 0) return 0.0;
  if (a == 0) return kNegInf;
  double mass = to_double(p);
  return mass * (log_of(a) - log_of(p)) - gamma * one_minus_entropy_term(p);
}

// Sum with a fixed order and compensation so that monotonicity checks between
// nearby iterates are not swamped by rounding.
class Accumulator {
 public:
  void add(double x) {
    double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class MirrorAscent {
 public:
  MirrorAscent(const NonNegMatrix<double>& a, double gamma, const SupportPattern& keep)
      : a_(a), gamma_(gamma), n_(a.n()), keep_(keep), free_(n_) {
    for (int i = 0; i < n_; ++i) {
      int count = 0;
      for (int j = 0; j < n_; ++j) count += keep_(i, j) ? 1 : 0;
      for (int j = 0; j < n_; ++j) free_.set(i, j, keep_(i, j) && count > 1);
    }
  }

  double objective(const Matrix<double>& p) const {
    Accumulator acc;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) acc.add(entry_term(a_(i, j), p(i, j), gamma_));
    return acc.value();
  }

  void clamp(Matrix<double>& p) const {
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        if (!keep_(i, j)) {
          p(i, j) = 0.0;
        } else if (free_(i, j)) {
          p(i, j) = std::clamp(p(i, j), kInteriorEps, 1.0 - kInteriorEps);
        } else {
          p(i, j) = 1.0;
        }
      }
    }
  }

  Matrix<double> gradient(const Matrix<double>& p) const {
    Matrix<double> g = bp_gradient(a_.matrix(), p, gamma_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (!free_(i, j)) g(i, j) = 0.0;
    return g;
  }

  Matrix<double> step(const Matrix<double>& p, const Matrix<double>& g, double eta) const {
    Matrix<double> y = Matrix<double>::square(n_);
    for (int i = 0; i < n_; ++i) {
      double row_max = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < n_; ++j)
        if (keep_(i, j)) row_max = std::max(row_max, std::log(p(i, j)) + eta * g(i, j));
      // Underflow to an exact zero would shrink the support below a pattern
      // with total support and stall the projection.
      for (int j = 0; j < n_; ++j)
        if (keep_(i, j))
          y(i, j) = std::max(std::exp(std::log(p(i, j)) + eta * g(i, j) - row_max), kInteriorEps);
    }
    Matrix<double> next = balance(y, kProjectionTol, kProjectionMaxIter).scaled;
    clamp(next);
    return next;
  }

  double residual(const Matrix<double>& p, const Matrix<double>& g) const {
    Matrix<double> unit = step(p, g, 1.0);
    double r = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r += std::abs(unit(i, j) - p(i, j));
    return r;
  }

  bool any_free() const {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (free_(i, j)) return true;
    return false;
  }

 private:
  const NonNegMatrix<double>& a_;
  double gamma_;
  int n_;
  SupportPattern keep_;
  SupportPattern free_;
};

}  // namespace

template <Scalar T>
double bp_objective(const NonNegMatrix<T>& a, const DoublyStochMatrix<T>& p, double gamma) {
  check_gamma(gamma);
  if (a.n() != p.n()) throw InputError("objective: dimension mismatch between A and P");
  double total = 0.0;
  for (int i = 0; i < a.n(); ++i) {
    for (int j = 0; j < a.n(); ++j) {
      double t = entry_term(a(i, j), p(i, j), gamma);
      if (t == kNegInf) return kNegInf;
      total += t;
    }
  }
  return total;
}

template <Scalar T>
double beta_objective(const NonNegMatrix<T>& a, const DoublyStochMatrix<T>& p) {
  return bp_objective(a, p, -1.0);
}

double bp_objective_raw(const Matrix<double>& a, const Matrix<double>& p, double gamma) {
  if (a.rows() != p.rows() || a.cols() != p.cols()) {
    throw InputError("objective: dimension mismatch between A and P");
  }
  double total = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      double t = entry_term(a(i, j), p(i, j), gamma);
      if (t == kNegInf) return kNegInf;
      total += t;
    }
  }
  return total;
}

Matrix<double> bp_gradient(const Matrix<double>& a, const Matrix<double>& p, double gamma) {
  if (a.rows() != p.rows() || a.cols() != p.cols()) {
    throw InputError("gradient: dimension mismatch between A and P");
  }
  Matrix<double> g(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      if (a(i, j) == 0.0) continue;
      const double pe = p(i, j);
      g(i, j) = std::log(a(i, j) / pe) - 1.0 + gamma * (std::log1p(-pe) + 1.0);
    }
  }
  return g;
}

BetheResult optimize(const NonNegMatrix<double>& a, double gamma, const OptimizeOptions& opts) {
  check_gamma(gamma);
  if (!(opts.tol > 0)) throw InputError("optimize: tolerance must be positive");
  BetheResult result;
  result.gamma = gamma;
  const SupportPattern support = SupportPattern::of(a);
  if (!perfect_matching(support)) {
    result.log_value = kNegInf;
    result.converged = true;
    return result;
  }
  const SupportPattern keep = matchable_support(support);
  MirrorAscent ascent(a, gamma, keep);

  Matrix<double> pruned = a.matrix();
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j)
      if (!keep(i, j)) pruned(i, j) = 0.0;
  Matrix<double> p = balance(pruned, kProjectionTol, kProjectionMaxIter).scaled;
  ascent.clamp(p);
  double f = ascent.objective(p);

  double eta = 1.0;
  int iter = 0;
  double residual = 0.0;
  if (ascent.any_free()) {
    while (true) {
      Matrix<double> g = ascent.gradient(p);
      residual = ascent.residual(p, g);
      if (residual <= opts.tol || iter >= opts.max_iter) break;
      bool moved = false;
      while (eta >= kMinStep) {
        Matrix<double> candidate = ascent.step(p, g, eta);
        double fc = ascent.objective(candidate);
        // Near the optimum the gain per step drops under the noise floor;
        // there a step counts as progress only if it shrinks the residual.
        const double noise = kObjectiveNoise * (1.0 + std::abs(f));
        bool accept = fc > f + noise;
        if (!accept && fc >= f - noise)
          accept = ascent.residual(candidate, ascent.gradient(candidate)) < residual;
        if (accept) {
          p = std::move(candidate);
          f = fc;
          moved = true;
          eta = std::min(eta * 2.0, kMaxStep);
          break;
        }
        eta *= 0.5;
      }
      if (!moved) break;
      ++iter;
    }
  }

  result.iterations = iter;
  result.gradient_residual = residual;
  result.converged = residual <= opts.tol;
  result.optimizer = validate_doubly_stochastic(p);
  result.log_value = bp_objective(a, *result.optimizer, gamma);
  return result;
}

template double beta_objective<double>(const NonNegMatrix<double>&, const DoublyStochMatrix<double>&);
template double beta_objective<BigRational>(const NonNegMatrix<BigRational>&,
                                            const DoublyStochMatrix<BigRational>&);
template double bp_objective<double>(const NonNegMatrix<double>&, const DoublyStochMatrix<double>&,
                                     double);
template double bp_objective<BigRational>(const NonNegMatrix<BigRational>&,
                                          const DoublyStochMatrix<BigRational>&, double);

}  // namespace permbound
