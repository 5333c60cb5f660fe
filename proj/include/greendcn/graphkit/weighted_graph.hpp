#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "greendcn/error.hpp"

namespace greendcn::graphkit {

/// Undirected graph with non-negative edge weights. Parallel edges are
/// allowed and act as one edge with the summed weight.
template <typename W = double>
class WeightedGraph {
  static_assert(std::is_arithmetic_v<W>);

 public:
  struct Edge {
    std::size_t u;
    std::size_t v;
    W weight;
  };

  WeightedGraph() = default;
  explicit WeightedGraph(std::size_t vertices) : n_(vertices) {}

  std::size_t vertex_count() const { return n_; }
  std::span<const Edge> edges() const { return edges_; }

  void add_edge(std::size_t u, std::size_t v, W weight) {
    if (u >= n_ || v >= n_)
      throw DomainError("graph: edge endpoint out of range (" + std::to_string(u) + ", " +
                        std::to_string(v) + ")");
    if (u == v) throw DomainError("graph: self-loop on vertex " + std::to_string(u));
    if constexpr (std::is_floating_point_v<W>) {
      if (!std::isfinite(weight)) throw DomainError("graph: non-finite edge weight");
    }
    if (weight < W{0}) throw DomainError("graph: negative edge weight");
    edges_.push_back({u, v, weight});
  }

  /// Total weight of edges whose endpoints carry different labels.
  W cut_weight(std::span<const std::size_t> label) const {
    if (label.size() != n_) throw DomainError("graph: label vector has wrong length");
    W sum{0};
    for (const Edge& e : edges_)
      if (label[e.u] != label[e.v]) sum += e.weight;
    return sum;
  }

  W cut_weight(const std::vector<bool>& side) const {
    if (side.size() != n_) throw DomainError("graph: side vector has wrong length");
    W sum{0};
    for (const Edge& e : edges_)
      if (side[e.u] != side[e.v]) sum += e.weight;
    return sum;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
};

}  // namespace greendcn::graphkit
