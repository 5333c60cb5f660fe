#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "greendcn/error.hpp"
#include "greendcn/graphkit/max_flow.hpp"
#include "greendcn/graphkit/weighted_graph.hpp"

namespace greendcn::graphkit {

/// Gomory-Hu cut tree rooted at vertex 0. Vertex v > 0 hangs below
/// parent[v] through an edge labelled weight[v]; removing that edge splits
/// the vertices into a minimum cut between v and parent[v].
template <typename W>
struct CutTree {
  std::vector<std::size_t> parent;
  std::vector<W> weight;

  std::size_t vertex_count() const { return parent.size(); }

  /// Vertices on v's side when the edge (v, parent[v]) is removed.
  std::vector<bool> subtree_side(std::size_t v) const {
    const std::size_t n = parent.size();
    std::vector<bool> side(n, false);
    for (std::size_t u = 0; u < n; ++u) {
      std::size_t x = u;
      // Walk to the root; at most n steps in a valid tree.
      for (std::size_t steps = 0; steps <= n; ++steps) {
        if (x == v) {
          side[u] = true;
          break;
        }
        if (x == 0) break;
        x = parent[x];
      }
    }
    return side;
  }

  /// Minimum label on the tree path between u and v, i.e. their min-cut value.
  W min_cut(std::size_t u, std::size_t v) const {
    if (u == v) throw DomainError("CutTree::min_cut: identical vertices");
    auto depth_of = [&](std::size_t x) {
      std::size_t d = 0;
      while (x != 0) {
        x = parent[x];
        ++d;
      }
      return d;
    };
    std::size_t du = depth_of(u), dv = depth_of(v);
    W best = std::numeric_limits<W>::max();
    while (du > dv) { best = std::min(best, weight[u]); u = parent[u]; --du; }
    while (dv > du) { best = std::min(best, weight[v]); v = parent[v]; --dv; }
    while (u != v) {
      best = std::min(best, std::min(weight[u], weight[v]));
      u = parent[u];
      v = parent[v];
    }
    return best;
  }
};

/// Gusfield's construction: n - 1 max-flow calls on the original graph, no
/// contraction. Disconnected pairs get label 0.
template <typename W>
CutTree<W> gomory_hu_tree(const WeightedGraph<W>& graph) {
  const std::size_t n = graph.vertex_count();
  CutTree<W> tree;
  tree.parent.assign(n, 0);
  tree.weight.assign(n, W{0});
  for (std::size_t s = 1; s < n; ++s) {
    const std::size_t t = tree.parent[s];
    const MinCut<W> cut = max_flow_min_cut(graph, s, t);
    tree.weight[s] = cut.value;
    for (std::size_t i = 0; i < n; ++i)
      if (i != s && cut.source_side[i] && tree.parent[i] == t) tree.parent[i] = s;
    if (cut.source_side[tree.parent[t]]) {
      tree.parent[s] = tree.parent[t];
      tree.parent[t] = s;
      tree.weight[s] = tree.weight[t];
      tree.weight[t] = cut.value;
    }
  }
  return tree;
}

}  // namespace greendcn::graphkit
