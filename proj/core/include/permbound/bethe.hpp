#pragma once

#include <optional>

#include "permbound/matrix.hpp"

namespace permbound {

// Objectives over the Birkhoff polytope, all in the log domain:
//
//   bp_gamma(A, P) = sum_e P_e log(A_e / P_e) - gamma (1 - P_e) log(1 - P_e)
//   beta(A, P)     = bp_{-1}(A, P)
//
// with 0 log(0 / x) = 0 and 0 log 0 = 0. The value is -inf exactly when P puts
// mass on an entry where A vanishes.

/// Throws InputError on dimension mismatch.
template <Scalar T>
double beta_objective(const NonNegMatrix<T>& a, const DoublyStochMatrix<T>& p);

/// Throws InputError on dimension mismatch or gamma outside [-1, 1].
template <Scalar T>
double bp_objective(const NonNegMatrix<T>& a, const DoublyStochMatrix<T>& p, double gamma);

/// The same sum evaluated on an arbitrary P in [0, 1]^{n x n}, without the
/// doubly stochastic requirement. Used for finite-difference checks.
double bp_objective_raw(const Matrix<double>& a, const Matrix<double>& p, double gamma);

/// Entrywise partial derivatives of bp_objective_raw at an interior P:
///   d/dP_e = log(A_e / P_e) - 1 + gamma (log(1 - P_e) + 1).
/// Entries with A_e = 0 are reported as 0 (they are frozen by the optimizer).
Matrix<double> bp_gradient(const Matrix<double>& a, const Matrix<double>& p, double gamma);

/// gamma = -1 case: log(A_e / (P_e (1 - P_e))) - 2.
inline Matrix<double> beta_gradient(const Matrix<double>& a, const Matrix<double>& p) {
  return bp_gradient(a, p, -1.0);
}

struct OptimizeOptions {
  double tol = 1e-8;        // first-order residual target
  int max_iter = 100000;
};

/// Outcome of maximizing bp_gamma(A, .) over the Birkhoff polytope.
struct BetheResult {
  std::optional<DoublyStochMatrix<double>> optimizer;  // empty iff per(A) = 0
  double log_value = 0.0;       // objective at `optimizer`; -inf iff per(A) = 0
  int iterations = 0;
  bool converged = false;
  double gradient_residual = 0.0;
  double gamma = -1.0;
};

/// Entropic mirror ascent: P <- Sinkhorn(P * exp(eta * grad)), started from the
/// Sinkhorn scaling of A, with backtracking on eta so the objective never
/// decreases. Entries of A outside every perfect matching stay at 0.
///
/// The reported residual is the l1 distance between the final iterate and its
/// unit-step mirror update; it vanishes exactly at first-order stationary
/// points. If it does not drop below `opts.tol` within `opts.max_iter` steps
/// the best iterate is returned with converged = false.
BetheResult optimize(const NonNegMatrix<double>& a, double gamma, const OptimizeOptions& opts = {});

/// log bethe(A) and its maximizer.
inline BetheResult bethe(const NonNegMatrix<double>& a, const OptimizeOptions& opts = {}) {
  return optimize(a, -1.0, opts);
}

}  // namespace permbound
