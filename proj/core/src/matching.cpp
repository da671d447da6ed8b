#include "permbound/matching.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>

namespace permbound {
namespace {

constexpr int kFree = -1;
constexpr int kInf = std::numeric_limits<int>::max();

struct HopcroftKarp {
  const SupportPattern& g;
  int n;
  std::vector<int> row_match;
  std::vector<int> col_match;
  std::vector<int> dist;

  explicit HopcroftKarp(const SupportPattern& support)
      : g(support), n(support.n()), row_match(n, kFree), col_match(n, kFree), dist(n) {}

  bool bfs() {
    std::queue<int> q;
    bool found = false;
    for (int i = 0; i < n; ++i) {
      if (row_match[i] == kFree) {
        dist[i] = 0;
        q.push(i);
      } else {
        dist[i] = kInf;
      }
    }
    while (!q.empty()) {
      int i = q.front();
      q.pop();
      for (int j = 0; j < n; ++j) {
        if (!g(i, j)) continue;
        int next = col_match[j];
        if (next == kFree) {
          found = true;
        } else if (dist[next] == kInf) {
          dist[next] = dist[i] + 1;
          q.push(next);
        }
      }
    }
    return found;
  }

  bool dfs(int i) {
    for (int j = 0; j < n; ++j) {
      if (!g(i, j)) continue;
      int next = col_match[j];
      if (next == kFree || (dist[next] == dist[i] + 1 && dfs(next))) {
        row_match[i] = j;
        col_match[j] = i;
        return true;
      }
    }
    dist[i] = kInf;
    return false;
  }

  int run() {
    int size = 0;
    while (bfs()) {
      for (int i = 0; i < n; ++i)
        if (row_match[i] == kFree && dfs(i)) ++size;
    }
    return size;
  }
};

// Tarjan's strongly connected components on an adjacency list.
std::vector<int> scc_ids(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<char> on_stack(n, 0);
  int counter = 0;
  int components = 0;
  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (int w : adj[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        comp[w] = components;
      } while (w != v);
      ++components;
    }
  };
  for (int v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);
  return comp;
}

}  // namespace

std::optional<std::vector<int>> perfect_matching(const SupportPattern& support) {
  HopcroftKarp hk(support);
  if (hk.run() != support.n()) return std::nullopt;
  return hk.row_match;
}

SupportPattern matchable_support(const SupportPattern& support) {
  auto matching = perfect_matching(support);
  if (!matching) throw ZeroPermanentError();
  const int n = support.n();
  std::vector<int> row_of_col(n);
  for (int i = 0; i < n; ++i) row_of_col[(*matching)[i]] = i;

  // Edge (i, j) off the matching lies on an alternating cycle iff row i can
  // reach the row currently matched to column j and vice versa.
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (support(i, j) && (*matching)[i] != j) adj[i].push_back(row_of_col[j]);
  std::vector<int> comp = scc_ids(adj);

  SupportPattern out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!support(i, j)) continue;
      out.set(i, j, (*matching)[i] == j || comp[i] == comp[row_of_col[j]]);
    }
  }
  return out;
}

}  // namespace permbound
