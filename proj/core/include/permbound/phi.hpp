#pragma once

#include <span>
#include <utility>
#include <vector>

#include "permbound/log_form.hpp"
#include "permbound/matrix.hpp"

namespace permbound {

/// The gap function on the simplex:
///
///   phi(p) = sum_k p_k log(p_1 + ... + p_k) + sum_k p_k log(p_k + ... + p_n)
///            - 2 sum_k (1 - p_k) log(1 - p_k)
///
/// Its maximum over every simplex is log 2, attained at the points with two
/// coordinates equal to 1/2. Zero coordinates contribute nothing, so dropping
/// or inserting them leaves the value unchanged (bit for bit: the same terms
/// are summed in the same order).
template <Scalar T>
double phi(const StochasticVector<T>& p);

/// phi on raw coordinates assumed to lie on the simplex (no validation).
double phi_unchecked(std::span<const double> p);

/// phi as an exact symbolic form, for sign-exact comparisons.
LogLinearForm phi_form(const StochasticVector<BigRational>& p);

/// (sqrt(17) - 3) / 2: coordinates r, s with r + s at most this can be merged
/// without decreasing phi.
inline const double kMergeThreshold = (std::sqrt(17.0) - 3.0) / 2.0;

/// r + s <= (sqrt(17) - 3) / 2, decided exactly for rationals through the
/// equivalent (2 (r + s) + 3)^2 <= 17.
bool within_merge_threshold(double r, double s);
bool within_merge_threshold(const BigRational& r, const BigRational& s);

struct ReductionOutcome {
  bool applicable;  // r + s <= (sqrt(17) - 3) / 2
  bool holds;       // phi(q, r, s, t) <= phi(q, r + s, t)
};

/// Compares phi(q, r, s, t) with phi(q, r + s, t). Float mode allows 1e-12 of
/// rounding slack; rational mode is exact. Throws InputError unless
/// (q, r, s, t) lies on the simplex.
template <Scalar T>
ReductionOutcome reduction_check(const T& q, const T& r, const T& s, const T& t);

/// The (q, t) maximizing phi(q, r, s, t) - phi(q, r + s, t) for fixed (r, s):
///   q* = (1 - r (1 + r + s)) / (2 + r + s),  t* = (1 - s (1 + r + s)) / (2 + r + s),
/// which satisfy q* + r + s + t* = 1. Throws InputError unless
/// (1 + r + s) max(r, s) <= 1, the condition for both to be nonnegative.
template <Scalar T>
std::pair<T, T> stationary_qt(const T& r, const T& s);

struct PhiMaxResult {
  double value = 0.0;
  std::vector<double> argmax;
};

/// Dense grid search of phi over the simplex of dimension 2 or 3. With
/// `restrict_to_u` (n = 3 only) the search is limited to q, s <= 1 - gamma,
/// gamma the merge threshold.
PhiMaxResult phi_max_search(int n, double step = 1e-3, bool restrict_to_u = false);

/// sum (1 - p_k) log(1 - p_k) >= sum p_k log(prefix_k) + sum p_k log(suffix_k).
/// Float mode allows 1e-12 slack; rational mode is exact.
template <Scalar T>
bool prefix_suffix_check(const StochasticVector<T>& p);

/// Left side minus right side of the inequality above, in floating point.
template <Scalar T>
double prefix_suffix_slack(const StochasticVector<T>& p);

}  // namespace permbound
