#include "permbound/phi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace permbound {
namespace {

constexpr double kFloatSlack = 1e-12;

double xlog_one_minus(double p) {
  if (p >= 1.0) return 0.0;
  return (1.0 - p) * std::log1p(-p);
}

double xlog_one_minus(const BigRational& p) {
  BigRational q = 1 - p;
  if (q == 0) return 0.0;
  return q.get_d() * log_of(q);
}

// The two "prefix/suffix" sums of phi, each skipping zero coordinates.
template <Scalar T>
std::pair<double, double> prefix_suffix_sums(std::span<const T> p) {
  const std::size_t n = p.size();
  double prefix_total = 0.0;
  T running(0);
  for (std::size_t k = 0; k < n; ++k) {
    running += p[k];
    if (p[k] != 0) prefix_total += to_double(p[k]) * log_of(running);
  }
  std::vector<T> suffix(n);
  running = T(0);
  for (std::size_t k = n; k-- > 0;) {
    running += p[k];
    suffix[k] = running;
  }
  double suffix_total = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    if (p[k] != 0) suffix_total += to_double(p[k]) * log_of(suffix[k]);
  return {prefix_total, suffix_total};
}

template <Scalar T>
double one_minus_total(std::span<const T> p) {
  double total = 0.0;
  for (const T& x : p) total += xlog_one_minus(x);
  return total;
}

void add_prefix_suffix(LogLinearForm& form, std::span<const BigRational> p, const BigRational& sign) {
  const std::size_t n = p.size();
  BigRational running = 0;
  for (std::size_t k = 0; k < n; ++k) {
    running += p[k];
    form.add(sign * p[k], running);
  }
  running = 0;
  for (std::size_t k = n; k-- > 0;) {
    running += p[k];
    form.add(sign * p[k], running);
  }
}

void add_one_minus(LogLinearForm& form, std::span<const BigRational> p, const BigRational& factor) {
  for (const BigRational& x : p) {
    BigRational q = 1 - x;
    form.add(factor * q, q);
  }
}

}  // namespace

double phi_unchecked(std::span<const double> p) {
  auto [prefix, suffix] = prefix_suffix_sums(p);
  return prefix + suffix - 2.0 * one_minus_total(p);
}

template <Scalar T>
double phi(const StochasticVector<T>& p) {
  auto [prefix, suffix] = prefix_suffix_sums(p.values());
  return prefix + suffix - 2.0 * one_minus_total(p.values());
}

LogLinearForm phi_form(const StochasticVector<BigRational>& p) {
  LogLinearForm form;
  add_prefix_suffix(form, p.values(), BigRational(1));
  add_one_minus(form, p.values(), BigRational(-2));
  return form;
}

bool within_merge_threshold(double r, double s) { return r + s <= kMergeThreshold; }

bool within_merge_threshold(const BigRational& r, const BigRational& s) {
  BigRational x = 2 * (r + s) + 3;
  if (x < 0) return true;
  return x * x <= 17;
}

template <Scalar T>
ReductionOutcome reduction_check(const T& q, const T& r, const T& s, const T& t) {
  StochasticVector<T> split({q, r, s, t});
  T merged_rs = r + s;
  StochasticVector<T> merged({q, merged_rs, t});
  ReductionOutcome out{within_merge_threshold(r, s), false};
  if constexpr (is_exact_v<T>) {
    out.holds = compare(phi_form(split), phi_form(merged)) <= 0;
  } else {
    out.holds = phi(split) <= phi(merged) + kFloatSlack;
  }
  return out;
}

template <Scalar T>
std::pair<T, T> stationary_qt(const T& r, const T& s) {
  if (r < 0 || s < 0) throw InputError("stationary_qt: r and s must be nonnegative");
  T spread = 1 + r + s;
  T big = r < s ? s : r;
  T cond = spread * big;
  if (cond > 1) throw InputError("stationary_qt: requires (1 + r + s) max(r, s) <= 1");
  T denom = 2 + r + s;
  T q = (1 - r * spread) / denom;
  T t = (1 - s * spread) / denom;
  return {q, t};
}

PhiMaxResult phi_max_search(int n, double step, bool restrict_to_u) {
  if (n != 2 && n != 3) throw InputError("phi_max_search: n must be 2 or 3");
  if (!(step > 0 && step <= 0.5)) throw InputError("phi_max_search: step must lie in (0, 1/2]");
  if (restrict_to_u && n != 3) throw InputError("phi_max_search: the U restriction needs n = 3");
  const long k_max = std::lround(1.0 / step);
  PhiMaxResult best{-std::numeric_limits<double>::infinity(), {}};
  if (n == 2) {
    for (long i = 0; i <= k_max; ++i) {
      double q = static_cast<double>(i) / k_max;
      std::vector<double> p{q, 1.0 - q};
      double v = phi_unchecked(p);
      if (v > best.value) best = {v, p};
    }
    return best;
  }
  const double u_edge = 1.0 - kMergeThreshold;
  for (long i = 0; i <= k_max; ++i) {
    double q = static_cast<double>(i) / k_max;
    if (restrict_to_u && q > u_edge) break;
    for (long j = 0; i + j <= k_max; ++j) {
      double s = static_cast<double>(j) / k_max;
      if (restrict_to_u && s > u_edge) break;
      double r = static_cast<double>(k_max - i - j) / k_max;
      std::vector<double> p{q, r, s};
      double v = phi_unchecked(p);
      if (v > best.value) best = {v, p};
    }
  }
  return best;
}

template <Scalar T>
double prefix_suffix_slack(const StochasticVector<T>& p) {
  auto [prefix, suffix] = prefix_suffix_sums(p.values());
  return one_minus_total(p.values()) - (prefix + suffix);
}

template <Scalar T>
bool prefix_suffix_check(const StochasticVector<T>& p) {
  if constexpr (is_exact_v<T>) {
    LogLinearForm form;
    add_one_minus(form, p.values(), BigRational(1));
    add_prefix_suffix(form, p.values(), BigRational(-1));
    return form.sign() >= 0;
  } else {
    return prefix_suffix_slack(p) >= -kFloatSlack;
  }
}

template double phi<double>(const StochasticVector<double>&);
template double phi<BigRational>(const StochasticVector<BigRational>&);
template ReductionOutcome reduction_check<double>(const double&, const double&, const double&,
                                                  const double&);
template ReductionOutcome reduction_check<BigRational>(const BigRational&, const BigRational&,
                                                       const BigRational&, const BigRational&);
template std::pair<double, double> stationary_qt<double>(const double&, const double&);
template std::pair<BigRational, BigRational> stationary_qt<BigRational>(const BigRational&,
                                                                        const BigRational&);
template double prefix_suffix_slack<double>(const StochasticVector<double>&);
template double prefix_suffix_slack<BigRational>(const StochasticVector<BigRational>&);
template bool prefix_suffix_check<double>(const StochasticVector<double>&);
template bool prefix_suffix_check<BigRational>(const StochasticVector<BigRational>&);

}  // namespace permbound
