#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include "greendcn/error.hpp"
#include "greendcn/graphkit/weighted_graph.hpp"

namespace greendcn::graphkit {

template <typename W>
struct MinCut {
  W value{};
  std::vector<bool> source_side;  ///< true for vertices on the s side
};

namespace detail {

// Dinic's algorithm over the undirected graph: every edge becomes a pair of
// arcs that are each other's residual twin, both with capacity w.
template <typename W>
class Dinic {
 public:
  Dinic(const WeightedGraph<W>& g) : adj_(g.vertex_count()), level_(g.vertex_count()), it_(g.vertex_count()) {
    W total{0};
    for (const auto& e : g.edges()) {
      if (e.weight == W{0}) continue;
      adj_[e.u].push_back({e.v, adj_[e.v].size(), e.weight});
      adj_[e.v].push_back({e.u, adj_[e.u].size() - 1, e.weight});
      total += e.weight;
    }
    if constexpr (std::is_floating_point_v<W>) eps_ = total * W(1e-12);
  }

  W run(std::size_t s, std::size_t t) {
    W flow{0};
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (true) {
        const W pushed = dfs(s, t, std::numeric_limits<W>::max());
        if (pushed <= eps_) break;
        flow += pushed;
      }
    }
    return flow;
  }

  std::vector<bool> reachable_from(std::size_t s) const {
    std::vector<bool> seen(adj_.size(), false);
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (const Arc& a : adj_[u])
        if (a.cap > eps_ && !seen[a.to]) {
          seen[a.to] = true;
          stack.push_back(a.to);
        }
    }
    return seen;
  }

 private:
  struct Arc {
    std::size_t to;
    std::size_t rev;
    W cap;
  };

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (const Arc& a : adj_[u])
        if (a.cap > eps_ && level_[a.to] < 0) {
          level_[a.to] = level_[u] + 1;
          q.push(a.to);
        }
    }
    return level_[t] >= 0;
  }

  W dfs(std::size_t u, std::size_t t, W limit) {
    if (u == t) return limit;
    for (std::size_t& i = it_[u]; i < adj_[u].size(); ++i) {
      Arc& a = adj_[u][i];
      if (a.cap <= eps_ || level_[a.to] != level_[u] + 1) continue;
      const W got = dfs(a.to, t, std::min(limit, a.cap));
      if (got > eps_) {
        a.cap -= got;
        adj_[a.to][a.rev].cap += got;
        return got;
      }
    }
    return W{0};
  }

  std::vector<std::vector<Arc>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
  W eps_{0};
};

}  // namespace detail

/// Maximum s-t flow and a minimum cut realising it (the residual-reachable
/// side of s).
template <typename W>
MinCut<W> max_flow_min_cut(const WeightedGraph<W>& graph, std::size_t s, std::size_t t) {
  const std::size_t n = graph.vertex_count();
  if (s >= n || t >= n) throw DomainError("max_flow_min_cut: terminal out of range");
  if (s == t) throw DomainError("max_flow_min_cut: source equals sink (" + std::to_string(s) + ")");
  detail::Dinic<W> dinic(graph);
  MinCut<W> out;
  out.value = dinic.run(s, t);
  out.source_side = dinic.reachable_from(s);
  return out;
}

}  // namespace greendcn::graphkit
