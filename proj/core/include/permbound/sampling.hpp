#pragma once

#include <cstdint>
#include <random>

#include "permbound/log_form.hpp"
#include "permbound/matrix.hpp"
#include "permbound/permutation.hpp"

namespace permbound {

inline constexpr int kEnumerationLimit = 7;
inline constexpr int kDefaultRetryCap = 1000;

/// The sampler got stuck (every remaining column had weight zero) on more
/// consecutive attempts than the retry cap allows.
class SamplingError : public Error {
 public:
  using Error::Error;
};

/// mu(sigma) > 0 but nu(sigma) = 0, so KL(mu || nu) is infinite.
class AbsoluteContinuityError : public InputError {
 public:
  explicit AbsoluteContinuityError(Permutation witness);
  const Permutation& witness() const { return witness_; }

 private:
  Permutation witness_;
};

/// Sequential proposal: rows are visited in the order order[0], order[1], ...
/// and row order[i] picks an unused column with probability proportional to P.
template <Scalar T>
struct NuDistribution {
  NuDistribution(DoublyStochMatrix<T> p_, Permutation order_) : p(std::move(p_)), order(std::move(order_)) {
    if (order.size() != p.n()) throw InputError("row order size does not match the matrix");
  }

  DoublyStochMatrix<T> p;
  Permutation order;
};

/// nu(sigma) = prod_i P[pi(i), sigma(pi(i))] / sum_{j >= i} P[pi(i), sigma(pi(j))].
/// A step with zero numerator and zero denominator contributes probability 0;
/// a positive numerator over a zero denominator throws InternalError.
template <Scalar T>
T nu_prob(const NuDistribution<T>& d, const Permutation& sigma);

/// log nu(sigma), -inf when nu(sigma) = 0.
template <Scalar T>
double log_nu_prob(const NuDistribution<T>& d, const Permutation& sigma);

/// One draw from nu. A stranded attempt restarts from scratch; after
/// `retry_cap` consecutive stranded attempts SamplingError is thrown.
template <Scalar T>
Permutation nu_sample(const NuDistribution<T>& d, std::mt19937_64& rng, int retry_cap = kDefaultRetryCap);

template <Scalar T>
Permutation nu_sample(const NuDistribution<T>& d, std::uint64_t seed, int retry_cap = kDefaultRetryCap) {
  std::mt19937_64 rng(seed);
  return nu_sample(d, rng, retry_cap);
}

/// `count` independent draws sharing one generator.
template <Scalar T>
std::vector<Permutation> nu_sample_many(const NuDistribution<T>& d, long count, std::mt19937_64& rng,
                                        int retry_cap = kDefaultRetryCap);

/// KL(mu || nu) by enumerating S_n (n <= 7). Zero exactly when mu = nu
/// pointwise in rational mode. Throws AbsoluteContinuityError with a witness
/// and ZeroPermanentError when per(A) = 0.
template <Scalar T>
double kl_mu_nu(const NonNegMatrix<T>& a, const NuDistribution<T>& d);

/// E_pi[sum_k p_k log(sum_{j >=_pi k} p_j)] over all n! orderings of the
/// coordinates, where j >=_pi k means j is placed no earlier than k.
template <Scalar T>
double ordering_expectation(std::span<const T> p);

/// The entropy bound with every appearance of mu removed:
///   sum_e P_e log(A_e / P_e) + sum_i ordering_expectation(P[i, :]),  P = marginals(A).
/// It upper-bounds log per(A). Exact enumeration, n <= 7.
template <Scalar T>
double entropy_upper_bound(const NonNegMatrix<T>& a);

struct MonteCarloValue {
  double value = 0.0;
  double stderr_ = 0.0;
  long samples = 0;
};

/// entropy_upper_bound with each row expectation replaced by an average over
/// `samples` uniformly random orderings. Unbiased; reports the standard error.
MonteCarloValue entropy_upper_bound_mc(const NonNegMatrix<double>& a, long samples, std::mt19937_64& rng);

/// E_pi[sum_k p_k log(sum_{j >=_pi k} p_j) - (1 - p_k) log(1 - p_k)] over all
/// orderings (n <= 7). At most log sqrt(2) on every simplex.
template <Scalar T>
double row_ordering_gap(const StochasticVector<T>& p);

/// row_ordering_gap as an exact symbolic form.
LogLinearForm row_ordering_gap_form(const StochasticVector<BigRational>& p);

struct ImportanceEstimate {
  double log_estimate = 0.0;     // log of the mean importance weight
  double relative_stderr = 0.0;  // standard error of the mean over the mean
  long samples = 0;
};

/// Estimates per(A) as the mean of prod_i A[i, sigma(i)] / nu(sigma) over
/// sigma ~ nu, in log domain. A demonstration utility, not a bound.
ImportanceEstimate importance_permanent(const NonNegMatrix<double>& a, const NuDistribution<double>& d,
                                        long samples, std::mt19937_64& rng);

/// Row order from a name: "identity", "reverse", or "random" (drawn from rng).
Permutation make_order(const std::string& name, int n, std::mt19937_64& rng);

}  // namespace permbound
