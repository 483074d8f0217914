#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <queue>
#include <type_traits>
#include <vector>

#include "wmstat/rational.hpp"

namespace wmstat {

// Dinic's algorithm over a capacity type T (double or ExactRational).
// Floating capacities treat residuals at or below 1e-12 as saturated.
template <class T>
class MaxFlow {
 public:
  struct Edge {
    std::size_t to;
    std::size_t rev;
    T cap;
    T flow;
  };

  explicit MaxFlow(std::size_t nodes) : adj_(nodes), level_(nodes), iter_(nodes) {}

  // Returns a handle usable with flow_on().
  std::pair<std::size_t, std::size_t> add_edge(std::size_t from, std::size_t to, T cap) {
    const std::size_t fi = adj_[from].size();
    const std::size_t ti = adj_[to].size() + (from == to ? 1 : 0);
    adj_[from].push_back({to, ti, cap, T(0)});
    adj_[to].push_back({from, fi, T(0), T(0)});
    return {from, fi};
  }

  T solve(std::size_t source, std::size_t sink) {
    T total(0);
    while (bfs(source, sink)) {
      std::fill(iter_.begin(), iter_.end(), 0);
      while (true) {
        T pushed = dfs(source, sink, T(-1));
        if (!positive(pushed)) break;
        total += pushed;
      }
    }
    return total;
  }

  const T& flow_on(std::pair<std::size_t, std::size_t> handle) const {
    return adj_[handle.first][handle.second].flow;
  }

  const std::vector<Edge>& edges_from(std::size_t v) const { return adj_[v]; }

 private:
  static bool positive(const T& v) {
    if constexpr (std::is_floating_point_v<T>) {
      return v > T(1e-12);
    } else {
      return sgn(v) > 0;
    }
  }

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      for (const Edge& e : adj_[v]) {
        if (level_[e.to] < 0 && positive(T(e.cap - e.flow))) {
          level_[e.to] = level_[v] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  // limit < 0 means unlimited (source call).
  T dfs(std::size_t v, std::size_t t, T limit) {
    if (v == t) return limit;
    for (std::size_t& i = iter_[v]; i < adj_[v].size(); ++i) {
      Edge& e = adj_[v][i];
      T residual = e.cap - e.flow;
      if (level_[e.to] != level_[v] + 1 || !positive(residual)) continue;
      T want = (limit < T(0) || residual < limit) ? residual : limit;
      T got = dfs(e.to, t, want);
      if (positive(got)) {
        e.flow += got;
        adj_[e.to][e.rev].flow -= got;
        return got;
      }
    }
    return T(0);
  }

  std::vector<std::vector<Edge>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
};

}  // namespace wmstat
