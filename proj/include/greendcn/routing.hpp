#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "greendcn/error.hpp"
#include "greendcn/graphkit/ffd.hpp"
#include "greendcn/power.hpp"
#include "greendcn/topology.hpp"
#include "greendcn/workload.hpp"

namespace greendcn {

inline constexpr double kMbpsPerGbps = 1000.0;

enum class OnViolation { kThrow, kRecord };

struct RoutingPlan {
  std::size_t timeslot = 0;
  std::vector<Demand> demands;
  std::vector<Path> paths;  ///< paths[i] carries demands[i]
  LoadMap loads;            ///< Gbps per switch
  std::vector<CapacityViolationEntry> violations;
};

/// Switches allowed to carry traffic in one timeslot.
struct ActiveSet {
  std::vector<std::vector<std::uint32_t>> agg_positions;  ///< per pod
  std::vector<SwitchId> cores;                            ///< ascending
  std::vector<SwitchId> tors;                             ///< ascending
  std::vector<bool> mask;                                 ///< by switch id

  bool contains(SwitchId s) const { return s < mask.size() && mask[s]; }
  std::size_t agg_count() const {
    std::size_t n = 0;
    for (const auto& p : agg_positions) n += p.size();
    return n;
  }
  std::size_t size() const { return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true)); }
};

namespace detail {

inline void add_path_load(LoadMap& loads, const Path& path, double gbps) {
  for (SwitchId s : path) loads.loads[s] += gbps;
}

inline void collect_violations(RoutingPlan& plan, const PowerParams& params, OnViolation policy,
                               const char* who) {
  for (std::size_t s = 0; s < plan.loads.loads.size(); ++s)
    if (!within_capacity(plan.loads.loads[s], params.capacity()))
      plan.violations.push_back({plan.timeslot, s, plan.loads.loads[s]});
  if (!plan.violations.empty() && policy == OnViolation::kThrow) {
    std::string msg = std::string(who) + ": timeslot " + std::to_string(plan.timeslot) +
                      " over capacity at switch";
    for (const auto& v : plan.violations) msg += " " + std::to_string(v.switch_id);
    throw CapacityViolation(msg, plan.violations);
  }
}

template <typename Choose>
RoutingPlan route_each(const DemandSet& ds, const FatTree& tree, const PowerParams& params,
                       OnViolation policy, const char* who, Choose choose) {
  RoutingPlan plan;
  plan.timeslot = ds.timeslot;
  plan.demands = ds.demands;
  plan.loads = LoadMap(ds.timeslot, tree.switch_count());
  plan.paths.reserve(ds.demands.size());
  for (const Demand& d : ds.demands) {
    const auto candidates = candidate_paths(d.src, d.dst, tree);
    const Path& p = candidates[choose(candidates)];
    plan.paths.push_back(p);
    add_path_load(plan.loads, p, d.rate_mbps / kMbpsPerGbps);
  }
  collect_violations(plan, params, policy, who);
  return plan;
}

}  // namespace detail

/// Deterministic shortest path: the lowest-index aggregation and core.
inline RoutingPlan sp_route(const DemandSet& demands, const FatTree& tree,
                            const PowerParams& params = PowerParams::commodity(),
                            OnViolation policy = OnViolation::kThrow) {
  return detail::route_each(demands, tree, params, policy, "sp_route",
                            [](const std::vector<Path>&) { return std::size_t{0}; });
}

/// Per-flow uniform choice among the equal-cost paths. The stream is seeded
/// from (seed, timeslot) so timeslots differ but runs repeat.
inline RoutingPlan ecmp_route(const DemandSet& demands, const FatTree& tree, std::uint64_t seed,
                              const PowerParams& params = PowerParams::commodity(),
                              OnViolation policy = OnViolation::kThrow) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(demands.timeslot)};
  std::mt19937_64 rng(seq);
  return detail::route_each(demands, tree, params, policy, "ecmp_route",
                            [&](const std::vector<Path>& c) {
                              return std::uniform_int_distribution<std::size_t>(0, c.size() - 1)(rng);
                            });
}

/// Minimal switch set for a timeslot. Per pod the aggregation count is
/// ceil(traffic / C), raised to the FFD bin count of the pod's flows; pods
/// with cross-pod traffic all use positions 0..M-1. Cores follow the same
/// rule on inter-pod traffic and are taken round-robin over the selected
/// positions. `extra` adds switches per layer on escalation.
inline ActiveSet estimate_active_set(const DemandSet& demands, const FatTree& tree,
                                     const PowerParams& params,
                                     std::span<const SwitchId> occupied_tors = {},
                                     std::uint32_t extra = 0) {
  const double cap = params.capacity();
  const std::uint32_t pods = tree.pod_count();
  const std::uint32_t half = tree.half();
  std::vector<double> pod_traffic(pods, 0.0);
  std::vector<std::vector<double>> pod_flows(pods);
  std::vector<bool> cross(pods, false);
  std::vector<double> inter_flows;
  double inter = 0.0;

  ActiveSet out;
  out.mask.assign(tree.switch_count(), false);
  for (SwitchId t : occupied_tors) {
    if (tree.layer(t) != Layer::kTor) throw DomainError("estimate_active_set: switch is not a ToR");
    out.mask[t] = true;
  }

  for (const Demand& d : demands.demands) {
    const ServerLocation a = tree.locate(d.src);
    const ServerLocation b = tree.locate(d.dst);
    out.mask[tree.tor(a.pod, a.rack)] = true;
    out.mask[tree.tor(b.pod, b.rack)] = true;
    const double g = d.rate_mbps / kMbpsPerGbps;
    if (a.pod == b.pod && a.rack == b.rack) continue;
    pod_traffic[a.pod] += g;
    pod_flows[a.pod].push_back(g);
    if (a.pod != b.pod) {
      pod_traffic[b.pod] += g;
      pod_flows[b.pod].push_back(g);
      cross[a.pod] = cross[b.pod] = true;
      inter += g;
      inter_flows.push_back(g);
    }
  }

  auto needed = [&](double total, const std::vector<double>& flows, const std::string& where) {
    if (flows.empty()) return std::uint32_t{0};
    const double ceil_count = std::ceil(total / cap * (1.0 - kCapacityTolerance));
    std::uint32_t n = static_cast<std::uint32_t>(std::max(1.0, ceil_count));
    try {
      const auto bins = graphkit::ffd_pack(flows, cap, kCapacityTolerance);
      n = std::max<std::uint32_t>(n, static_cast<std::uint32_t>(bins.size()));
    } catch (const DomainError& e) {
      throw InfeasibleError("estimate_active_set: " + where + ": " + e.what());
    }
    return n + extra;
  };

  std::vector<std::uint32_t> n_agg(pods, 0);
  std::uint32_t m = 0;
  for (std::uint32_t p = 0; p < pods; ++p) {
    n_agg[p] = needed(pod_traffic[p], pod_flows[p], "pod " + std::to_string(p));
    if (cross[p]) m = std::max(m, n_agg[p]);
  }
  std::uint32_t n_core = needed(inter, inter_flows, "core layer");
  if (n_core > 0) m = std::max(m, (n_core + half - 1) / half);
  if (m > half || n_core > half * half)
    throw InfeasibleError("estimate_active_set: timeslot " + std::to_string(demands.timeslot) +
                          " needs more switches than the tree has (" + std::to_string(m) +
                          " aggregation positions, " + std::to_string(n_core) + " cores)");

  out.agg_positions.assign(pods, {});
  for (std::uint32_t p = 0; p < pods; ++p) {
    const std::uint32_t count = cross[p] ? m : n_agg[p];
    if (count > half)
      throw InfeasibleError("estimate_active_set: pod " + std::to_string(p) + " needs " +
                            std::to_string(count) + " aggregation switches");
    for (std::uint32_t a = 0; a < count; ++a) {
      out.agg_positions[p].push_back(a);
      out.mask[tree.agg(p, a)] = true;
    }
  }
  if (n_core > 0) {
    for (std::uint32_t c = 0; c < n_core; ++c) out.cores.push_back(tree.core(c % m, c / m));
    std::sort(out.cores.begin(), out.cores.end());
    for (SwitchId c : out.cores) out.mask[c] = true;
  }
  for (std::uint32_t p = 0; p < pods; ++p)
    for (std::uint32_t r = 0; r < half; ++r)
      if (out.mask[tree.tor(p, r)]) out.tors.push_back(tree.tor(p, r));
  return out;
}

/// Heaviest demand first, each onto the active candidate path whose busiest
/// aggregation or core switch ends up least loaded; ties to the lowest path
/// index.
inline RoutingPlan balanced_route(const DemandSet& demands, const FatTree& tree,
                                  const ActiveSet& active,
                                  const PowerParams& params = PowerParams::commodity(),
                                  OnViolation policy = OnViolation::kThrow) {
  RoutingPlan plan;
  plan.timeslot = demands.timeslot;
  plan.demands = demands.demands;
  plan.loads = LoadMap(demands.timeslot, tree.switch_count());
  plan.paths.assign(demands.demands.size(), Path{});

  std::vector<std::size_t> order(demands.demands.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return demands.demands[a].rate_mbps > demands.demands[b].rate_mbps;
  });

  for (std::size_t i : order) {
    const Demand& d = demands.demands[i];
    const double g = d.rate_mbps / kMbpsPerGbps;
    const auto candidates = candidate_paths(d.src, d.dst, tree);
    std::size_t best = candidates.size();
    double best_peak = 0.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const Path& path = candidates[c];
      double peak = 0.0;
      bool usable = true;
      for (std::size_t h = 0; h < path.size(); ++h) {
        const SwitchId s = path[h];
        if (!active.contains(s)) {
          usable = false;
          break;
        }
        // Every candidate shares the endpoint ToRs, so only the interior counts.
        if (h > 0 && h + 1 < path.size()) peak = std::max(peak, plan.loads.loads[s] + g);
      }
      if (usable && (best == candidates.size() || peak < best_peak)) {
        best = c;
        best_peak = peak;
      }
    }
    if (best == candidates.size())
      throw InfeasibleError("balanced_route: timeslot " + std::to_string(demands.timeslot) +
                            " demand " + std::to_string(d.src) + "->" + std::to_string(d.dst) +
                            " has no path inside the active set");
    plan.paths[i] = candidates[best];
    detail::add_path_load(plan.loads, candidates[best], g);
  }
  detail::collect_violations(plan, params, policy, "balanced_route");
  return plan;
}

struct EerResult {
  ActiveSet active;
  RoutingPlan plan;
  bool escalated = false;
};

/// Active-set estimation followed by balanced routing. On a capacity
/// violation the set grows by one switch per layer and routing is retried
/// once.
inline EerResult eer(const DemandSet& demands, const FatTree& tree,
                     const PowerParams& params = PowerParams::commodity(),
                     std::span<const SwitchId> occupied_tors = {}) {
  EerResult out;
  try {
    out.active = estimate_active_set(demands, tree, params, occupied_tors, 0);
    out.plan = balanced_route(demands, tree, out.active, params, OnViolation::kThrow);
    return out;
  } catch (const InfeasibleError&) {
  }
  out.escalated = true;
  out.active = estimate_active_set(demands, tree, params, occupied_tors, 1);
  out.plan = balanced_route(demands, tree, out.active, params, OnViolation::kThrow);
  return out;
}

/// Per-link loads of a plan, counting server-ToR links. Server u is node
/// switch_count + u; keys are (min node, max node).
inline std::map<std::pair<std::uint32_t, std::uint32_t>, double> link_loads(const RoutingPlan& plan,
                                                                            const FatTree& tree) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> out;
  const std::uint32_t off = tree.switch_count();
  auto add = [&](std::uint32_t a, std::uint32_t b, double g) {
    out[{std::min(a, b), std::max(a, b)}] += g;
  };
  for (std::size_t i = 0; i < plan.demands.size(); ++i) {
    const Demand& d = plan.demands[i];
    const Path& p = plan.paths[i];
    const double g = d.rate_mbps / kMbpsPerGbps;
    add(off + d.src, p.front(), g);
    for (std::size_t h = 1; h < p.size(); ++h) add(p[h - 1], p[h], g);
    add(p.back(), off + d.dst, g);
  }
  return out;
}

/// Switch loads rebuilt as half the sum of incident link loads.
inline std::vector<double> loads_from_links(const RoutingPlan& plan, const FatTree& tree) {
  std::vector<double> x(tree.switch_count(), 0.0);
  const std::uint32_t n = tree.switch_count();
  for (const auto& [link, g] : link_loads(plan, tree)) {
    if (link.first < n) x[link.first] += 0.5 * g;
    if (link.second < n) x[link.second] += 0.5 * g;
  }
  return x;
}

/// Structural problems of a plan: broken paths, load bookkeeping mismatch,
/// overloads, and switches outside the active set when one is given.
inline std::vector<std::string> validate_plan(const RoutingPlan& plan, const FatTree& tree,
                                              const PowerParams& params,
                                              const ActiveSet* active = nullptr,
                                              double rel_tolerance = 1e-9) {
  std::vector<std::string> problems;
  if (plan.paths.size() != plan.demands.size()) {
    problems.push_back("path count differs from demand count");
    return problems;
  }
  for (std::size_t i = 0; i < plan.demands.size(); ++i) {
    const Demand& d = plan.demands[i];
    if (!is_valid_path(plan.paths[i], d.src, d.dst, tree))
      problems.push_back("demand " + std::to_string(d.src) + "->" + std::to_string(d.dst) +
                         ": invalid path");
    if (active)
      for (SwitchId s : plan.paths[i])
        if (!active->contains(s))
          problems.push_back("demand " + std::to_string(d.src) + "->" + std::to_string(d.dst) +
                             " uses inactive switch " + std::to_string(s));
  }
  const auto half_sum = loads_from_links(plan, tree);
  for (std::size_t s = 0; s < half_sum.size(); ++s) {
    const double x = plan.loads.loads.at(s);
    if (std::abs(half_sum[s] - x) > rel_tolerance * std::max(1.0, std::abs(x)))
      problems.push_back("switch " + std::to_string(s) + ": load " + std::to_string(x) +
                         " but links give " + std::to_string(half_sum[s]));
    if (!within_capacity(x, params.capacity()))
      problems.push_back("switch " + std::to_string(s) + " over capacity");
    if (active && x > 0.0 && !active->contains(static_cast<SwitchId>(s)))
      problems.push_back("sleeping switch " + std::to_string(s) + " carries load");
  }
  return problems;
}

}  // namespace greendcn
