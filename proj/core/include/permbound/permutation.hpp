#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "permbound/error.hpp"

namespace permbound {

/// A bijection of {0, ..., n-1}. Viewed as a perfect matching it is the set
/// of pairs (i, sigma[i]); viewed as an ordering it lists sigma[0] first.
class Permutation {
 public:
  Permutation() = default;

  /// Throws InputError unless `images` is a bijection onto 0..n-1.
  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    const int n = size();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int v : images_) {
      if (v < 0 || v >= n || seen[v]) {
        throw InputError("not a permutation: image " + std::to_string(v + 1) +
                         " is out of range or repeated");
      }
      seen[v] = 1;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 0);
    return Permutation(std::move(v));
  }

  static Permutation from_one_based(const std::vector<int>& images) {
    std::vector<int> v(images);
    for (int& x : v) --x;
    return Permutation(std::move(v));
  }

  int size() const { return static_cast<int>(images_.size()); }
  int operator[](int i) const { return images_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& images() const { return images_; }

  /// i -> pi(n - 1 - i): the same ordering read backwards.
  Permutation reversed() const {
    std::vector<int> v(images_.rbegin(), images_.rend());
    return Permutation(std::move(v));
  }

  Permutation inverse() const {
    std::vector<int> v(images_.size());
    for (int i = 0; i < size(); ++i) v[images_[i]] = i;
    return Permutation(std::move(v));
  }

  std::vector<int> one_based() const {
    std::vector<int> v(images_);
    for (int& x : v) ++x;
    return v;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> images_;
};

/// (sigma o pi)(i) = sigma(pi(i)).
inline Permutation compose(const Permutation& sigma, const Permutation& pi) {
  if (sigma.size() != pi.size()) throw InputError("compose: size mismatch");
  std::vector<int> v(static_cast<std::size_t>(pi.size()));
  for (int i = 0; i < pi.size(); ++i) v[i] = sigma[pi[i]];
  return Permutation(std::move(v));
}

/// Calls f(const Permutation&) for every element of S_n in lexicographic order.
template <class F>
void for_each_permutation(int n, F&& f) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  do {
    f(Permutation(v));
  } while (std::next_permutation(v.begin(), v.end()));
}

inline long factorial(int n) {
  long f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace permbound
