#pragma once

#include "permbound/matrix.hpp"
#include "permbound/permutation.hpp"

namespace permbound {

inline constexpr int kBruteForceLimit = 10;
inline constexpr int kRyserLimit = 30;

/// Sum over all n! permutations of the product of matched entries. Exact in
/// rational mode. Throws DimensionGuardError for n > kBruteForceLimit.
template <Scalar T>
T per_bruteforce(const NonNegMatrix<T>& a);

/// Ryser inclusion-exclusion with Gray-code subset order, O(2^n n). Float mode
/// accumulates the alternating terms with compensated summation in a fixed
/// order. Throws DimensionGuardError for n > kRyserLimit.
template <Scalar T>
T per_ryser(const NonNegMatrix<T>& a);

/// log per(A) in float mode, with rows pre-scaled by their maxima so large
/// entries do not overflow. Returns -inf when per(A) = 0.
double log_permanent(const NonNegMatrix<double>& a);
double log_permanent(const NonNegMatrix<BigRational>& a);

/// Permanent of A with row `row` and column `col` removed (1 for n = 1).
template <Scalar T>
T per_minor(const NonNegMatrix<T>& a, int row, int col);

/// prod_i A[i, sigma(i)].
template <Scalar T>
T matching_weight(const NonNegMatrix<T>& a, const Permutation& sigma);

/// The Gibbs distribution mu(sigma) = weight(sigma) / per(A) over S_n.
template <Scalar T>
class GibbsWeights {
 public:
  /// Throws ZeroPermanentError if per(A) = 0.
  explicit GibbsWeights(NonNegMatrix<T> a);

  const NonNegMatrix<T>& matrix() const { return a_; }
  const T& total() const { return total_; }
  T weight(const Permutation& sigma) const { return matching_weight(a_, sigma); }
  T prob(const Permutation& sigma) const;

 private:
  NonNegMatrix<T> a_;
  T total_;
};

/// mu(sigma). Throws ZeroPermanentError if per(A) = 0.
template <Scalar T>
T mu_prob(const NonNegMatrix<T>& a, const Permutation& sigma);

/// P[i, j] = Pr_{sigma ~ mu}[sigma(i) = j] = A[i, j] per(A minus row i, col j) / per(A).
/// Exactly doubly stochastic in rational mode. Throws ZeroPermanentError if
/// per(A) = 0 and DimensionGuardError beyond the Ryser guard.
template <Scalar T>
DoublyStochMatrix<T> marginals(const NonNegMatrix<T>& a);

}  // namespace permbound
