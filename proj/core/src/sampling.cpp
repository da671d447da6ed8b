#include "permbound/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "permbound/permanent.hpp"

namespace permbound {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_enumerable(const char* what, int n) {
  if (n > kEnumerationLimit) throw DimensionGuardError(what, n, kEnumerationLimit);
}

template <Scalar T>
void check_sizes(const NuDistribution<T>& d, int n) {
  if (d.p.n() != n) throw InputError("dimension mismatch between the proposal and the permutation");
}

// Orderings of 0..n-1, each visited once; f receives the ordering (first
// placed element first).
template <class F>
void for_each_ordering(int n, F&& f) {
  std::vector<int> ord(static_cast<std::size_t>(n));
  std::iota(ord.begin(), ord.end(), 0);
  do {
    f(ord);
  } while (std::next_permutation(ord.begin(), ord.end()));
}

// sum_k p_k log(suffix sum at k) for one ordering.
template <Scalar T>
double ordering_term(std::span<const T> p, const std::vector<int>& ord) {
  T running(0);
  double total = 0.0;
  for (std::size_t t = ord.size(); t-- > 0;) {
    const T& x = p[ord[t]];
    running += x;
    if (x != 0) total += to_double(x) * log_of(running);
  }
  return total;
}

double one_minus_log(double x) { return x >= 1.0 ? 0.0 : (1.0 - x) * std::log1p(-x); }

double one_minus_log(const BigRational& x) {
  BigRational q = 1 - x;
  if (q == 0) return 0.0;
  return q.get_d() * log_of(q);
}

Permutation sample_from(const Matrix<double>& p, const Permutation& order, std::mt19937_64& rng,
                        int retry_cap) {
  const int n = p.rows();
  std::vector<int> images(static_cast<std::size_t>(n));
  std::vector<char> used(static_cast<std::size_t>(n));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < retry_cap; ++attempt) {
    std::fill(used.begin(), used.end(), 0);
    bool stranded = false;
    for (int step = 0; step < n && !stranded; ++step) {
      const int row = order[step];
      double total = 0.0;
      for (int j = 0; j < n; ++j)
        if (!used[j]) total += p(row, j);
      if (!(total > 0.0)) {
        stranded = true;
        break;
      }
      const double target = unit(rng) * total;
      double acc = 0.0;
      int pick = -1;
      for (int j = 0; j < n; ++j) {
        if (used[j] || p(row, j) == 0.0) continue;
        pick = j;  // last positive column absorbs rounding at the top end
        acc += p(row, j);
        if (target < acc) break;
      }
      used[pick] = 1;
      images[row] = pick;
    }
    if (!stranded) return Permutation(images);
  }
  throw SamplingError("nu sampler stranded on " + std::to_string(retry_cap) +
                      " consecutive attempts (all remaining columns had zero weight)");
}

template <Scalar T>
double entry_term_sum(const NonNegMatrix<T>& a, const DoublyStochMatrix<T>& p) {
  double total = 0.0;
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j) {
      if (p(i, j) == 0) continue;
      T ratio = a(i, j);
      ratio /= p(i, j);
      total += to_double(p(i, j)) * log_of(ratio);
    }
  return total;
}

}  // namespace

AbsoluteContinuityError::AbsoluteContinuityError(Permutation witness)
    : InputError("nu assigns zero probability to a permutation of positive Gibbs weight"),
      witness_(std::move(witness)) {}

template <Scalar T>
T nu_prob(const NuDistribution<T>& d, const Permutation& sigma) {
  const int n = sigma.size();
  check_sizes(d, n);
  T prob(1);
  for (int i = 0; i < n; ++i) {
    const int row = d.order[i];
    T denom(0);
    for (int j = i; j < n; ++j) denom += d.p(row, sigma[d.order[j]]);
    const T& num = d.p(row, sigma[row]);
    if (num == 0) return T(0);
    if (denom == 0) throw InternalError("nu_prob: positive numerator over a zero denominator");
    prob *= num;
    prob /= denom;
  }
  return prob;
}

template <Scalar T>
double log_nu_prob(const NuDistribution<T>& d, const Permutation& sigma) {
  const int n = sigma.size();
  check_sizes(d, n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const int row = d.order[i];
    T denom(0);
    for (int j = i; j < n; ++j) denom += d.p(row, sigma[d.order[j]]);
    const T& num = d.p(row, sigma[row]);
    if (num == 0) return kNegInf;
    if (denom == 0) throw InternalError("log_nu_prob: positive numerator over a zero denominator");
    total += log_of(num) - log_of(denom);
  }
  return total;
}

template <Scalar T>
Permutation nu_sample(const NuDistribution<T>& d, std::mt19937_64& rng, int retry_cap) {
  if (retry_cap < 1) throw InputError("retry cap must be at least 1");
  return sample_from(to_double(d.p.matrix()), d.order, rng, retry_cap);
}

template <Scalar T>
std::vector<Permutation> nu_sample_many(const NuDistribution<T>& d, long count, std::mt19937_64& rng,
                                        int retry_cap) {
  if (retry_cap < 1) throw InputError("retry cap must be at least 1");
  if (count < 0) throw InputError("sample count must be nonnegative");
  const Matrix<double> p = to_double(d.p.matrix());
  std::vector<Permutation> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) out.push_back(sample_from(p, d.order, rng, retry_cap));
  return out;
}

template <Scalar T>
double kl_mu_nu(const NonNegMatrix<T>& a, const NuDistribution<T>& d) {
  const int n = a.n();
  check_enumerable("kl_mu_nu", n);
  check_sizes(d, n);
  GibbsWeights<T> mu(a);
  double total = 0.0;
  for_each_permutation(n, [&](const Permutation& sigma) {
    T m = mu.prob(sigma);
    if (m == 0) return;
    T v = nu_prob(d, sigma);
    if (v == 0) throw AbsoluteContinuityError(sigma);
    T ratio = m;
    ratio /= v;
    total += to_double(m) * log_of(ratio);
  });
  return total;
}

template <Scalar T>
double ordering_expectation(std::span<const T> p) {
  const int n = static_cast<int>(p.size());
  check_enumerable("ordering_expectation", n);
  double total = 0.0;
  for_each_ordering(n, [&](const std::vector<int>& ord) { total += ordering_term(p, ord); });
  return total / static_cast<double>(factorial(n));
}

template <Scalar T>
double entropy_upper_bound(const NonNegMatrix<T>& a) {
  const int n = a.n();
  check_enumerable("entropy_upper_bound", n);
  DoublyStochMatrix<T> p = marginals(a);
  double total = entry_term_sum(a, p);
  for (int i = 0; i < n; ++i) total += ordering_expectation(p.row(i));
  return total;
}

MonteCarloValue entropy_upper_bound_mc(const NonNegMatrix<double>& a, long samples, std::mt19937_64& rng) {
  if (samples < 2) throw InputError("Monte Carlo estimate needs at least 2 samples");
  const int n = a.n();
  DoublyStochMatrix<double> p = marginals(a);
  MonteCarloValue out;
  out.samples = samples;
  out.value = entry_term_sum(a, p);
  double variance = 0.0;
  std::vector<int> ord(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double mean = 0.0;
    double m2 = 0.0;
    for (long k = 0; k < samples; ++k) {
      std::iota(ord.begin(), ord.end(), 0);
      std::shuffle(ord.begin(), ord.end(), rng);
      const double x = ordering_term(p.row(i), ord);
      const double delta = x - mean;
      mean += delta / static_cast<double>(k + 1);
      m2 += delta * (x - mean);
    }
    out.value += mean;
    variance += m2 / static_cast<double>(samples - 1) / static_cast<double>(samples);
  }
  out.stderr_ = std::sqrt(variance);
  return out;
}

template <Scalar T>
double row_ordering_gap(const StochasticVector<T>& p) {
  double total = ordering_expectation(p.values());
  for (const T& x : p.values()) total -= one_minus_log(x);
  return total;
}

LogLinearForm row_ordering_gap_form(const StochasticVector<BigRational>& p) {
  const int n = p.size();
  check_enumerable("row_ordering_gap_form", n);
  const BigRational weight(1, factorial(n));
  LogLinearForm form;
  for_each_ordering(n, [&](const std::vector<int>& ord) {
    BigRational running = 0;
    for (std::size_t t = ord.size(); t-- > 0;) {
      running += p[ord[t]];
      form.add(weight * p[ord[t]], running);
    }
  });
  for (const BigRational& x : p.values()) {
    BigRational q = 1 - x;
    form.add(-q, q);
  }
  return form;
}

ImportanceEstimate importance_permanent(const NonNegMatrix<double>& a, const NuDistribution<double>& d,
                                        long samples, std::mt19937_64& rng) {
  if (samples < 1) throw InputError("importance sampling needs at least one sample");
  const int n = a.n();
  check_sizes(d, n);
  const Matrix<double> p = d.p.matrix();
  std::vector<double> log_w;
  log_w.reserve(static_cast<std::size_t>(samples));
  for (long k = 0; k < samples; ++k) {
    Permutation sigma = sample_from(p, d.order, rng, kDefaultRetryCap);
    double lw = -log_nu_prob(d, sigma);
    for (int i = 0; i < n; ++i) lw += std::log(a(i, sigma[i]));
    log_w.push_back(lw);
  }
  const double top = *std::max_element(log_w.begin(), log_w.end());
  ImportanceEstimate out;
  out.samples = samples;
  if (top == kNegInf) {
    out.log_estimate = kNegInf;
    return out;
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double lw : log_w) {
    const double w = std::exp(lw - top);
    sum += w;
    sum_sq += w * w;
  }
  const double count = static_cast<double>(samples);
  const double mean = sum / count;
  out.log_estimate = top + std::log(mean);
  if (samples > 1) {
    const double var = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1));
    out.relative_stderr = std::sqrt(var / count) / mean;
  }
  return out;
}

Permutation make_order(const std::string& name, int n, std::mt19937_64& rng) {
  if (name == "identity") return Permutation::identity(n);
  if (name == "reverse") return Permutation::identity(n).reversed();
  if (name == "random") {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 0);
    std::shuffle(v.begin(), v.end(), rng);
    return Permutation(std::move(v));
  }
  throw InputError("unknown row order '" + name + "' (expected identity, reverse or random)");
}

#define PERMBOUND_INSTANTIATE_SAMPLING(T)                                                        \
  template T nu_prob<T>(const NuDistribution<T>&, const Permutation&);                         \
  template double log_nu_prob<T>(const NuDistribution<T>&, const Permutation&);                \
  template Permutation nu_sample<T>(const NuDistribution<T>&, std::mt19937_64&, int);          \
  template std::vector<Permutation> nu_sample_many<T>(const NuDistribution<T>&, long,           \
                                                      std::mt19937_64&, int);                   \
  template double kl_mu_nu<T>(const NonNegMatrix<T>&, const NuDistribution<T>&);               \
  template double ordering_expectation<T>(std::span<const T>);                                 \
  template double entropy_upper_bound<T>(const NonNegMatrix<T>&);                              \
  template double row_ordering_gap<T>(const StochasticVector<T>&);

PERMBOUND_INSTANTIATE_SAMPLING(double)
PERMBOUND_INSTANTIATE_SAMPLING(BigRational)

#undef PERMBOUND_INSTANTIATE_SAMPLING

}  // namespace permbound
