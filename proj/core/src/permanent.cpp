#include "permbound/permanent.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "permbound/matching.hpp"

namespace permbound {
namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <Scalar T>
void brute_force_rec(const NonNegMatrix<T>& a, int row, std::vector<char>& used, const T& prefix,
                     T& total) {
  const int n = a.n();
  if (row == n) {
    total += prefix;
    return;
  }
  for (int j = 0; j < n; ++j) {
    if (used[j] || a(row, j) == 0) continue;
    used[j] = 1;
    T next = prefix * a(row, j);
    brute_force_rec(a, row + 1, used, next, total);
    used[j] = 0;
  }
}

template <Scalar T>
NonNegMatrix<T> minor_of(const NonNegMatrix<T>& a, int row, int col) {
  const int n = a.n();
  Matrix<T> m = Matrix<T>::square(n - 1);
  for (int i = 0, mi = 0; i < n; ++i) {
    if (i == row) continue;
    for (int j = 0, mj = 0; j < n; ++j) {
      if (j == col) continue;
      m(mi, mj++) = a(i, j);
    }
    ++mi;
  }
  return NonNegMatrix<T>(std::move(m));
}

// Rows divided by their maxima; per(A) = per(scaled) * prod(maxima).
struct RowScaled {
  NonNegMatrix<double> scaled;
  double log_scale;
  bool zero_row;
};

RowScaled scale_rows(const NonNegMatrix<double>& a) {
  const int n = a.n();
  Matrix<double> m = a.matrix();
  double log_scale = 0.0;
  bool zero_row = false;
  for (int i = 0; i < n; ++i) {
    double mx = 0.0;
    for (int j = 0; j < n; ++j) mx = std::max(mx, m(i, j));
    if (mx == 0.0) {
      zero_row = true;
      continue;
    }
    for (int j = 0; j < n; ++j) m(i, j) /= mx;
    log_scale += std::log(mx);
  }
  return {NonNegMatrix<double>(std::move(m)), log_scale, zero_row};
}

}  // namespace

template <Scalar T>
T per_bruteforce(const NonNegMatrix<T>& a) {
  if (a.n() > kBruteForceLimit) throw DimensionGuardError("per_bruteforce", a.n(), kBruteForceLimit);
  std::vector<char> used(static_cast<std::size_t>(a.n()), 0);
  T total(0);
  brute_force_rec(a, 0, used, T(1), total);
  return total;
}

template <Scalar T>
T per_ryser(const NonNegMatrix<T>& a) {
  const int n = a.n();
  if (n > kRyserLimit) throw DimensionGuardError("per_ryser", n, kRyserLimit);
  std::vector<T> row_sums(static_cast<std::size_t>(n), T(0));
  std::conditional_t<is_exact_v<T>, T, CompensatedSum> total{};
  const std::uint64_t subsets = std::uint64_t{1} << n;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const int col = std::countr_zero(k);
    const std::uint64_t bit = std::uint64_t{1} << col;
    gray ^= bit;
    if (gray & bit) {
      for (int i = 0; i < n; ++i) row_sums[i] += a(i, col);
    } else {
      for (int i = 0; i < n; ++i) row_sums[i] -= a(i, col);
    }
    T prod = row_sums[0];
    for (int i = 1; i < n; ++i) prod *= row_sums[i];
    // (-1)^(n - |S|) folded in directly.
    const bool negative = ((n - std::popcount(gray)) & 1) != 0;
    if constexpr (is_exact_v<T>) {
      if (negative) total -= prod; else total += prod;
    } else {
      total.add(negative ? -prod : prod);
    }
  }
  if constexpr (is_exact_v<T>) {
    return total;
  } else {
    return total.value();
  }
}

double log_permanent(const NonNegMatrix<double>& a) {
  RowScaled rs = scale_rows(a);
  if (rs.zero_row || !has_perfect_matching(a)) return -std::numeric_limits<double>::infinity();
  return rs.log_scale + std::log(per_ryser(rs.scaled));
}

double log_permanent(const NonNegMatrix<BigRational>& a) { return log_of(per_ryser(a)); }

template <Scalar T>
T per_minor(const NonNegMatrix<T>& a, int row, int col) {
  if (a.n() == 1) return T(1);
  return per_ryser(minor_of(a, row, col));
}

template <Scalar T>
T matching_weight(const NonNegMatrix<T>& a, const Permutation& sigma) {
  if (sigma.size() != a.n()) throw InputError("permutation size does not match matrix dimension");
  T w(1);
  for (int i = 0; i < a.n(); ++i) w *= a(i, sigma[i]);
  return w;
}

template <Scalar T>
GibbsWeights<T>::GibbsWeights(NonNegMatrix<T> a) : a_(std::move(a)), total_(per_ryser(a_)) {
  if (!(total_ > 0) || !has_perfect_matching(a_)) throw ZeroPermanentError();
}

template <Scalar T>
T GibbsWeights<T>::prob(const Permutation& sigma) const {
  T w = weight(sigma);
  w /= total_;
  return w;
}

template <Scalar T>
T mu_prob(const NonNegMatrix<T>& a, const Permutation& sigma) {
  return GibbsWeights<T>(a).prob(sigma);
}

template <Scalar T>
DoublyStochMatrix<T> marginals(const NonNegMatrix<T>& a) {
  const int n = a.n();
  if (n > kRyserLimit) throw DimensionGuardError("marginals", n, kRyserLimit);
  if (!has_perfect_matching(a)) throw ZeroPermanentError();
  // Marginals are invariant under row scaling; normalizing keeps float
  // permanents in range.
  const NonNegMatrix<T>* work = &a;
  std::optional<NonNegMatrix<double>> scaled;
  if constexpr (!is_exact_v<T>) {
    scaled = scale_rows(a).scaled;
    work = &*scaled;
  }
  const T total = per_ryser(*work);
  if (!(total > 0)) throw ZeroPermanentError();
  Matrix<T> p = Matrix<T>::square(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if ((*work)(i, j) == 0) continue;
      T v = (*work)(i, j) * per_minor(*work, i, j);
      v /= total;
      p(i, j) = v;
    }
  }
  return validate_doubly_stochastic(std::move(p));
}

#define PERMBOUND_INSTANTIATE_PERM(T)                                          \
  template T per_bruteforce<T>(const NonNegMatrix<T>&);                        \
  template T per_ryser<T>(const NonNegMatrix<T>&);                             \
  template T per_minor<T>(const NonNegMatrix<T>&, int, int);                   \
  template T matching_weight<T>(const NonNegMatrix<T>&, const Permutation&);   \
  template class GibbsWeights<T>;                                              \
  template T mu_prob<T>(const NonNegMatrix<T>&, const Permutation&);           \
  template DoublyStochMatrix<T> marginals<T>(const NonNegMatrix<T>&);

PERMBOUND_INSTANTIATE_PERM(double)
PERMBOUND_INSTANTIATE_PERM(BigRational)

#undef PERMBOUND_INSTANTIATE_PERM

}  // namespace permbound
