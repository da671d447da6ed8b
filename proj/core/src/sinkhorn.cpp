#include "permbound/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "permbound/matching.hpp"

namespace permbound {
namespace {

double max_deviation(const Matrix<double>& p) {
  const int n = p.rows();
  double dev = 0.0;
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += p(i, j);
    dev = std::max(dev, std::abs(sum - 1.0));
  }
  for (int j = 0; j < n; ++j) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += p(i, j);
    dev = std::max(dev, std::abs(sum - 1.0));
  }
  return dev;
}

void apply_scalers(const Matrix<double>& input, SinkhornBalance& b) {
  const int n = input.rows();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b.scaled(i, j) = b.row_scalers[i] * input(i, j) * b.col_scalers[j];
}

std::string describe(const SinkhornBalance& b) {
  std::ostringstream os;
  os.precision(3);
  os << "sinkhorn scaling did not converge after " << b.iterations
     << " sweeps (max deviation " << b.deviation << ")";
  return os.str();
}

}  // namespace

SinkhornError::SinkhornError(SinkhornBalance best) : Error(describe(best)), best_(std::move(best)) {}

SinkhornBalance sinkhorn_balance(const Matrix<double>& input, double tol, int max_iter) {
  const int n = input.rows();
  SinkhornBalance b{Matrix<double>::square(n), std::vector<double>(n, 1.0),
                    std::vector<double>(n, 1.0)};
  apply_scalers(input, b);
  b.deviation = max_deviation(b.scaled);
  b.converged = b.deviation < tol;
  while (!b.converged && b.iterations < max_iter) {
    for (int i = 0; i < n; ++i) {
      double sum = 0.0;
      for (int j = 0; j < n; ++j) sum += input(i, j) * b.col_scalers[j];
      b.row_scalers[i] = 1.0 / sum;
    }
    for (int j = 0; j < n; ++j) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += b.row_scalers[i] * input(i, j);
      b.col_scalers[j] = 1.0 / sum;
    }
    ++b.iterations;
    apply_scalers(input, b);
    b.deviation = max_deviation(b.scaled);
    b.converged = b.deviation < tol;
  }
  return b;
}

SinkhornBalance newton_balance(const Matrix<double>& input, SinkhornBalance start, double tol,
                               int max_iter) {
  const int n = input.rows();
  SinkhornBalance b = std::move(start);
  if (b.converged || n == 0) return b;
  // Unknowns: u_0..u_{n-1}, v_0..v_{n-2}; v_{n-1} = 0 pins the free shift.
  const int dim = 2 * n - 1;
  std::vector<double> u(n), v(n);
  for (int i = 0; i < n; ++i) u[i] = std::log(b.row_scalers[i]);
  for (int j = 0; j < n; ++j) v[j] = std::log(b.col_scalers[j]);
  for (int i = 0; i < n; ++i) u[i] += v[n - 1];
  for (int j = n; j-- > 0;) v[j] -= v[n - 1];

  auto evaluate = [&](const std::vector<double>& uu, const std::vector<double>& vv, Matrix<double>& x,
                      Eigen::VectorXd& g) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        x(i, j) = input(i, j) > 0.0 ? std::exp(std::log(input(i, j)) + uu[i] + vv[j]) : 0.0;
    g.setZero(dim);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        g[i] += x(i, j);
        if (j < n - 1) g[n + j] += x(i, j);
      }
    }
    for (int k = 0; k < dim; ++k) g[k] -= 1.0;
  };

  Matrix<double> x = Matrix<double>::square(n);
  Eigen::VectorXd g;
  evaluate(u, v, x, g);
  Eigen::MatrixXd h(dim, dim);
  std::vector<double> tu(n), tv(n);
  Matrix<double> tx = Matrix<double>::square(n);
  Eigen::VectorXd tg;
  while (b.iterations < max_iter) {
    b.scaled = x;
    b.deviation = max_deviation(x);
    if (b.deviation < tol) break;
    h.setZero();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        h(i, i) += x(i, j);
        if (j < n - 1) {
          h(n + j, n + j) += x(i, j);
          h(i, n + j) = x(i, j);
          h(n + j, i) = x(i, j);
        }
      }
    }
    // A whisker of damping keeps decomposable patterns (extra null
    // directions) solvable without disturbing the quadratic phase.
    const double damping = 1e-12 * h.diagonal().maxCoeff();
    h.diagonal().array() += damping;
    Eigen::VectorXd d = h.ldlt().solve(-g);
    const double norm = g.norm();
    double t = 1.0;
    bool accepted = false;
    while (t > 1e-10) {
      for (int i = 0; i < n; ++i) tu[i] = u[i] + t * d[i];
      for (int j = 0; j < n - 1; ++j) tv[j] = v[j] + t * d[n + j];
      tv[n - 1] = 0.0;
      evaluate(tu, tv, tx, tg);
      if (std::isfinite(tg.norm()) && tg.norm() <= (1.0 - 1e-4 * t) * norm) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    ++b.iterations;
    if (!accepted) break;
    u.swap(tu);
    v.swap(tv);
    std::swap(x, tx);
    g.swap(tg);
  }
  b.scaled = x;
  b.deviation = max_deviation(x);
  b.converged = b.deviation < tol;
  for (int i = 0; i < n; ++i) b.row_scalers[i] = std::exp(u[i]);
  for (int j = 0; j < n; ++j) b.col_scalers[j] = std::exp(v[j]);
  return b;
}

SinkhornBalance balance(const Matrix<double>& input, double tol, int max_iter) {
  constexpr int kWarmSweeps = 50;
  SinkhornBalance b = sinkhorn_balance(input, tol, std::min(kWarmSweeps, max_iter));
  if (b.converged) return b;
  return newton_balance(input, std::move(b), tol, max_iter);
}

SinkhornResult sinkhorn_scale(const NonNegMatrix<double>& a, double tol, int max_iter) {
  if (!(tol > 0)) throw InputError("sinkhorn_scale: tolerance must be positive");
  SupportPattern keep = matchable_support(SupportPattern::of(a));
  Matrix<double> pruned = a.matrix();
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j)
      if (!keep(i, j)) pruned(i, j) = 0.0;

  SinkhornBalance b = sinkhorn_balance(pruned, tol, max_iter);
  if (!b.converged) throw SinkhornError(std::move(b));
  return SinkhornResult{validate_doubly_stochastic(std::move(b.scaled), tol),
                        std::move(b.row_scalers), std::move(b.col_scalers), b.iterations};
}

}  // namespace permbound
