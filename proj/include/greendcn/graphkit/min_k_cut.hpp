#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "greendcn/error.hpp"
#include "greendcn/graphkit/gomory_hu.hpp"
#include "greendcn/graphkit/weighted_graph.hpp"

namespace greendcn::graphkit {

template <typename W>
struct KCut {
  std::vector<std::vector<std::size_t>> blocks;  ///< ordered by smallest member
  W weight{};                                   ///< total weight of crossing edges
};

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

/// Saran-Vazirani split: remove the union of the k - 1 lightest Gomory-Hu
/// cuts. That leaves at least k components; surplus components are merged
/// pairwise, heaviest connection first, until exactly k remain. The result
/// weighs at most (2 - 2/k) times the optimum k-cut.
template <typename W>
KCut<W> min_k_cut(const WeightedGraph<W>& graph, std::size_t k) {
  const std::size_t n = graph.vertex_count();
  if (k < 1 || k > n)
    throw DomainError("min_k_cut: k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");

  KCut<W> out;
  if (k == 1) {
    out.blocks.emplace_back(n);
    std::iota(out.blocks[0].begin(), out.blocks[0].end(), 0);
    out.weight = W{0};
    return out;
  }

  const CutTree<W> tree = gomory_hu_tree(graph);
  std::vector<std::size_t> tree_edges(n - 1);
  std::iota(tree_edges.begin(), tree_edges.end(), 1);
  std::stable_sort(tree_edges.begin(), tree_edges.end(),
                   [&](std::size_t a, std::size_t b) { return tree.weight[a] < tree.weight[b]; });

  const auto edges = graph.edges();
  std::vector<bool> removed(edges.size(), false);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const std::vector<bool> side = tree.subtree_side(tree_edges[i]);
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (side[edges[e].u] != side[edges[e].v]) removed[e] = true;
  }

  detail::DisjointSets dsu(n);
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (!removed[e]) dsu.unite(edges[e].u, edges[e].v);

  // Component ids in order of their smallest vertex.
  std::vector<std::size_t> comp(n);
  std::vector<std::size_t> root_to_comp(n, n);
  std::size_t count = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t r = dsu.find(v);
    if (root_to_comp[r] == n) root_to_comp[r] = count++;
    comp[v] = root_to_comp[r];
  }

  while (count > k) {
    std::vector<W> between(count * count, W{0});
    for (const auto& e : edges) {
      const std::size_t a = comp[e.u], b = comp[e.v];
      if (a != b) {
        between[std::min(a, b) * count + std::max(a, b)] += e.weight;
      }
    }
    std::size_t best_a = 0, best_b = 1;
    W best = between[0 * count + 1];
    for (std::size_t a = 0; a < count; ++a)
      for (std::size_t b = a + 1; b < count; ++b)
        if (between[a * count + b] > best) {
          best = between[a * count + b];
          best_a = a;
          best_b = b;
        }
    for (std::size_t v = 0; v < n; ++v) {
      if (comp[v] == best_b) comp[v] = best_a;
      else if (comp[v] > best_b) --comp[v];
    }
    --count;
  }

  out.blocks.assign(count, {});
  for (std::size_t v = 0; v < n; ++v) out.blocks[comp[v]].push_back(v);
  out.weight = graph.cut_weight(std::span<const std::size_t>(comp));
  return out;
}

}  // namespace greendcn::graphkit
