#pragma once

#include <vector>

#include "permbound/matrix.hpp"

namespace permbound {

/// Raw outcome of alternating row/column normalization.
struct SinkhornBalance {
  Matrix<double> scaled;  // diag(row_scalers) * input * diag(col_scalers)
  std::vector<double> row_scalers;
  std::vector<double> col_scalers;
  int iterations = 0;
  double deviation = 0.0;  // max |row or column sum - 1|
  bool converged = false;
};

/// Balances `input` in place of a copy until every row and column sum is
/// within `tol` of 1, or `max_iter` sweeps elapse. The caller guarantees the
/// support has total support; otherwise the scalers drift without converging.
SinkhornBalance sinkhorn_balance(const Matrix<double>& input, double tol, int max_iter);

/// Continues from `start` with damped Newton steps on the convex dual
///   f(u, v) = sum_ij input_ij exp(u_i + v_j) - sum_i u_i - sum_j v_j,
/// whose stationary points are the doubly stochastic scalings. Near targets on
/// the boundary of the polytope Sinkhorn sweeps converge sublinearly while
/// Newton stays quadratic. `iterations` counts sweeps plus Newton steps.
SinkhornBalance newton_balance(const Matrix<double>& input, SinkhornBalance start, double tol,
                               int max_iter);

/// A short run of Sinkhorn sweeps, then Newton if they have not reached `tol`.
SinkhornBalance balance(const Matrix<double>& input, double tol, int max_iter);

/// Thrown by sinkhorn_scale when `max_iter` sweeps do not reach `tol`; carries
/// the best iterate.
class SinkhornError : public Error {
 public:
  explicit SinkhornError(SinkhornBalance best);
  const SinkhornBalance& best() const { return best_; }

 private:
  SinkhornBalance best_;
};

struct SinkhornResult {
  DoublyStochMatrix<double> scaled;
  std::vector<double> row_scalers;
  std::vector<double> col_scalers;
  int iterations = 0;
};

/// Scales A to doubly stochastic form P = R A C. Entries of A that lie on no
/// perfect matching are dropped first (they vanish in the Sinkhorn limit), so
/// R A C reproduces P on the matchable support. Throws ZeroPermanentError when
/// A admits no perfect matching and SinkhornError on non-convergence.
SinkhornResult sinkhorn_scale(const NonNegMatrix<double>& a, double tol = 1e-12,
                              int max_iter = 100000);

}  // namespace permbound
