#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "greendcn/error.hpp"

namespace greendcn {

using SwitchId = std::uint32_t;
using ServerId = std::uint32_t;

enum class Layer : std::uint8_t { kTor, kAggregation, kCore };

inline const char* to_string(Layer l) {
  switch (l) {
    case Layer::kTor: return "tor";
    case Layer::kAggregation: return "agg";
    case Layer::kCore: return "core";
  }
  return "?";
}

/// Position of a switch. For ToR and aggregation switches `group` is the pod;
/// for core switches it is the column group, i.e. the aggregation position the
/// core attaches to in every pod.
struct SwitchInfo {
  Layer layer;
  std::uint32_t group;
  std::uint32_t index;
};

struct ServerLocation {
  std::uint32_t pod;
  std::uint32_t rack;  ///< rack index within the pod
  std::uint32_t slot;  ///< server index within the rack
  friend bool operator==(const ServerLocation&, const ServerLocation&) = default;
};

/// Switch sequence between the ToRs of two servers: [ToR], [ToR, Agg, ToR] or
/// [ToR, Agg, Core, Agg, ToR].
class Path {
 public:
  static constexpr std::size_t kMaxHops = 5;

  Path() = default;
  Path(std::initializer_list<SwitchId> hops) {
    for (SwitchId s : hops) push_back(s);
  }

  void push_back(SwitchId s) {
    if (size_ == kMaxHops) throw DomainError("Path: more than 5 hops");
    hops_[size_++] = s;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  SwitchId operator[](std::size_t i) const { return hops_[i]; }
  SwitchId front() const { return hops_[0]; }
  SwitchId back() const { return hops_[size_ - 1]; }
  const SwitchId* begin() const { return hops_.data(); }
  const SwitchId* end() const { return hops_.data() + size_; }
  std::span<const SwitchId> hops() const { return {hops_.data(), size_}; }

  friend bool operator==(const Path& a, const Path& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  }

 private:
  std::array<SwitchId, kMaxHops> hops_{};
  std::uint8_t size_ = 0;
};

/// k-ary Fat-Tree. Identities are pod-major:
///   ToR (pod p, rack r)        -> p*k + r
///   Agg (pod p, position a)    -> p*k + k/2 + a
///   Core (group g, index j)    -> k*k + g*(k/2) + j
///   Server (pod p, rack r, s)  -> p*(k/2)^2 + r*(k/2) + s
/// Core (g, j) links to aggregation position g of every pod.
class FatTree {
 public:
  static constexpr int kMinK = 4;
  static constexpr int kMaxK = 48;

  explicit FatTree(int k, int server_capacity = 2) : k_(k), server_capacity_(server_capacity) {
    if (k < kMinK || k > kMaxK || k % 2 != 0)
      throw ConfigError("fat-tree: k must be even and in [4, 48], got " + std::to_string(k));
    if (server_capacity < 1)
      throw ConfigError("fat-tree: server capacity must be >= 1, got " +
                        std::to_string(server_capacity));
    half_ = static_cast<std::uint32_t>(k / 2);
    build_adjacency();
  }

  int k() const { return k_; }
  std::uint32_t half() const { return half_; }
  std::uint32_t pod_count() const { return 2 * half_; }
  std::uint32_t racks_per_pod() const { return half_; }
  std::uint32_t aggs_per_pod() const { return half_; }
  std::uint32_t servers_per_rack() const { return half_; }
  std::uint32_t servers_per_pod() const { return half_ * half_; }
  std::uint32_t rack_count() const { return pod_count() * half_; }
  std::uint32_t core_count() const { return half_ * half_; }
  std::uint32_t switch_count() const { return pod_count() * 2 * half_ + core_count(); }
  std::uint32_t server_count() const { return pod_count() * servers_per_pod(); }

  int server_capacity() const { return server_capacity_; }
  long rack_slot_capacity() const { return static_cast<long>(servers_per_rack()) * server_capacity_; }
  long pod_slot_capacity() const { return static_cast<long>(servers_per_pod()) * server_capacity_; }
  long total_slots() const { return static_cast<long>(server_count()) * server_capacity_; }

  SwitchId tor(std::uint32_t pod, std::uint32_t rack) const { return pod * 2 * half_ + rack; }
  SwitchId agg(std::uint32_t pod, std::uint32_t pos) const { return pod * 2 * half_ + half_ + pos; }
  SwitchId core(std::uint32_t group, std::uint32_t index) const {
    return pod_count() * 2 * half_ + group * half_ + index;
  }

  ServerId server(std::uint32_t pod, std::uint32_t rack, std::uint32_t slot) const {
    return pod * servers_per_pod() + rack * half_ + slot;
  }

  SwitchInfo info(SwitchId s) const {
    check_switch(s);
    const std::uint32_t pod_switches = pod_count() * 2 * half_;
    if (s >= pod_switches) {
      const std::uint32_t c = s - pod_switches;
      return {Layer::kCore, c / half_, c % half_};
    }
    const std::uint32_t pod = s / (2 * half_);
    const std::uint32_t within = s % (2 * half_);
    if (within < half_) return {Layer::kTor, pod, within};
    return {Layer::kAggregation, pod, within - half_};
  }

  Layer layer(SwitchId s) const { return info(s).layer; }

  ServerLocation locate(ServerId server) const {
    if (server >= server_count())
      throw ConfigError("fat-tree: unknown server id " + std::to_string(server));
    const std::uint32_t pod = server / servers_per_pod();
    const std::uint32_t within = server % servers_per_pod();
    return {pod, within / half_, within % half_};
  }

  SwitchId tor_of(ServerId server) const {
    const ServerLocation loc = locate(server);
    return tor(loc.pod, loc.rack);
  }

  /// Switch-to-switch neighbours, ascending.
  std::span<const SwitchId> neighbors(SwitchId s) const {
    check_switch(s);
    return adjacency_[s];
  }

  bool adjacent(SwitchId a, SwitchId b) const {
    const auto n = neighbors(a);
    return std::binary_search(n.begin(), n.end(), b);
  }

  /// Servers attached to a ToR.
  std::vector<ServerId> rack_servers(SwitchId tor_id) const {
    const SwitchInfo i = info(tor_id);
    if (i.layer != Layer::kTor) throw ConfigError("fat-tree: switch is not a ToR");
    std::vector<ServerId> out;
    for (std::uint32_t s = 0; s < half_; ++s) out.push_back(server(i.group, i.index, s));
    return out;
  }

 private:
  void check_switch(SwitchId s) const {
    if (s >= switch_count())
      throw ConfigError("fat-tree: unknown switch id " + std::to_string(s));
  }

  void build_adjacency() {
    adjacency_.assign(switch_count(), {});
    auto link = [&](SwitchId a, SwitchId b) {
      adjacency_[a].push_back(b);
      adjacency_[b].push_back(a);
    };
    for (std::uint32_t p = 0; p < pod_count(); ++p) {
      for (std::uint32_t r = 0; r < half_; ++r)
        for (std::uint32_t a = 0; a < half_; ++a) link(tor(p, r), agg(p, a));
      for (std::uint32_t a = 0; a < half_; ++a)
        for (std::uint32_t j = 0; j < half_; ++j) link(agg(p, a), core(a, j));
    }
    for (auto& n : adjacency_) std::sort(n.begin(), n.end());
  }

  int k_;
  int server_capacity_;
  std::uint32_t half_ = 0;
  std::vector<std::vector<SwitchId>> adjacency_;
};

inline FatTree build_fat_tree(int k, int server_capacity = 2) { return FatTree(k, server_capacity); }

inline ServerLocation locate(ServerId server, const FatTree& tree) { return tree.locate(server); }

/// Equal-cost up-down paths between the ToRs of two distinct servers.
/// Ordered by aggregation position, then core index.
inline std::vector<Path> candidate_paths(ServerId src, ServerId dst, const FatTree& tree) {
  if (src == dst)
    throw DomainError("candidate_paths: source and destination are server " + std::to_string(src));
  const ServerLocation a = tree.locate(src);
  const ServerLocation b = tree.locate(dst);
  const SwitchId ta = tree.tor(a.pod, a.rack);
  const SwitchId tb = tree.tor(b.pod, b.rack);
  std::vector<Path> out;
  if (ta == tb) {
    out.push_back(Path{ta});
  } else if (a.pod == b.pod) {
    out.reserve(tree.half());
    for (std::uint32_t g = 0; g < tree.half(); ++g) out.push_back(Path{ta, tree.agg(a.pod, g), tb});
  } else {
    out.reserve(static_cast<std::size_t>(tree.half()) * tree.half());
    for (std::uint32_t g = 0; g < tree.half(); ++g)
      for (std::uint32_t j = 0; j < tree.half(); ++j)
        out.push_back(Path{ta, tree.agg(a.pod, g), tree.core(g, j), tree.agg(b.pod, g), tb});
  }
  return out;
}

/// Checks the layer sequence, hop adjacency and endpoints of a path.
inline bool is_valid_path(const Path& path, ServerId src, ServerId dst, const FatTree& tree) {
  static constexpr std::array<Layer, 1> kOne{Layer::kTor};
  static constexpr std::array<Layer, 3> kThree{Layer::kTor, Layer::kAggregation, Layer::kTor};
  static constexpr std::array<Layer, 5> kFive{Layer::kTor, Layer::kAggregation, Layer::kCore,
                                              Layer::kAggregation, Layer::kTor};
  std::span<const Layer> expected;
  switch (path.size()) {
    case 1: expected = kOne; break;
    case 3: expected = kThree; break;
    case 5: expected = kFive; break;
    default: return false;
  }
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] >= tree.switch_count() || tree.layer(path[i]) != expected[i]) return false;
    if (i > 0 && !tree.adjacent(path[i - 1], path[i])) return false;
  }
  return path.front() == tree.tor_of(src) && path.back() == tree.tor_of(dst);
}

}  // namespace greendcn
