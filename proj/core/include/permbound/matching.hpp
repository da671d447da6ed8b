#pragma once

#include <optional>
#include <vector>

#include "permbound/matrix.hpp"

namespace permbound {

/// Bipartite support graph of a square matrix: rows on one side, columns on
/// the other, an edge wherever the entry is nonzero.
class SupportPattern {
 public:
  explicit SupportPattern(int n) : n_(n), edges_(static_cast<std::size_t>(n) * n, 0) {}

  template <Scalar T>
  static SupportPattern of(const NonNegMatrix<T>& a) {
    SupportPattern s(a.n());
    for (int i = 0; i < a.n(); ++i)
      for (int j = 0; j < a.n(); ++j) s.set(i, j, a(i, j) > 0);
    return s;
  }

  int n() const { return n_; }
  bool operator()(int i, int j) const { return edges_[static_cast<std::size_t>(i) * n_ + j] != 0; }
  void set(int i, int j, bool on) { edges_[static_cast<std::size_t>(i) * n_ + j] = on ? 1 : 0; }

  friend bool operator==(const SupportPattern&, const SupportPattern&) = default;

 private:
  int n_;
  std::vector<char> edges_;
};

/// Maximum matching by Hopcroft-Karp; returns row -> column for a perfect
/// matching, or nothing when none exists (per = 0).
std::optional<std::vector<int>> perfect_matching(const SupportPattern& support);

template <Scalar T>
bool has_perfect_matching(const NonNegMatrix<T>& a) {
  return perfect_matching(SupportPattern::of(a)).has_value();
}

/// Edges that belong to at least one perfect matching (the total-support
/// part). Every doubly stochastic matrix dominated by `support` vanishes off
/// this pattern. Throws ZeroPermanentError when no perfect matching exists.
SupportPattern matchable_support(const SupportPattern& support);

}  // namespace permbound
