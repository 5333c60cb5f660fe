#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "greendcn/error.hpp"
#include "greendcn/graphkit/kmeans_pp.hpp"
#include "greendcn/graphkit/min_k_cut.hpp"
#include "greendcn/graphkit/weighted_graph.hpp"
#include "greendcn/job.hpp"
#include "greendcn/placement.hpp"
#include "greendcn/topology.hpp"
#include "greendcn/workload.hpp"

namespace greendcn {

/// VMs of one job that are meant to share a server.
struct SuperVM {
  std::uint32_t job_id = 0;
  std::vector<std::uint32_t> members;  ///< ascending VM indices
  long slots = 0;

  friend bool operator==(const SuperVM&, const SuperVM&) = default;
};

inline std::vector<SuperVM> singleton_super_vms(const Job& job) {
  std::vector<SuperVM> out;
  out.reserve(job.vm_count);
  for (std::uint32_t m = 0; m < job.vm_count; ++m) out.push_back({job.id, {m}, job.vm_resource});
  return out;
}

/// Greedy pair merging on the symmetrised lifetime traffic: seed a group with
/// the heaviest remaining pair, grow it with the VM that talks most to the
/// group until it fills a server, then start over on what is left. Ties go
/// to the lowest VM index; leftovers become singletons.
inline std::vector<SuperVM> shrink_to_super_vms(const Job& job, long server_slot_capacity) {
  if (server_slot_capacity < 1)
    throw ConfigError("shrink: server capacity must be >= 1, got " + std::to_string(server_slot_capacity));
  const long res = job.vm_resource;
  if (res > server_slot_capacity)
    throw DomainError("shrink: job " + std::to_string(job.id) + " has VMs larger than a server");
  const std::size_t n = job.vm_count;
  const auto group_cap = static_cast<std::size_t>(server_slot_capacity / res);

  std::vector<SuperVM> out;
  std::vector<bool> alive(n, true);
  std::size_t remaining = n;
  if (group_cap >= 2 && n >= 2) {
    const TrafficMatrix ref = referential_matrix(job);
    std::vector<double> w(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) w[a * n + b] = a == b ? 0.0 : ref(a, b) + ref(b, a);

    while (remaining >= 2) {
      std::size_t bi = n, bj = n;
      double best = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!alive[i]) continue;
        for (std::size_t j = i + 1; j < n; ++j)
          if (alive[j] && w[i * n + j] > best) {
            best = w[i * n + j];
            bi = i;
            bj = j;
          }
      }
      std::vector<std::uint32_t> group{static_cast<std::uint32_t>(bi), static_cast<std::uint32_t>(bj)};
      alive[bi] = alive[bj] = false;
      remaining -= 2;
      std::vector<double> row(n);
      for (std::size_t m = 0; m < n; ++m) row[m] = w[bi * n + m] + w[bj * n + m];
      while (group.size() < group_cap && remaining > 0) {
        std::size_t pick = n;
        double top = -1.0;
        for (std::size_t m = 0; m < n; ++m)
          if (alive[m] && row[m] > top) {
            top = row[m];
            pick = m;
          }
        group.push_back(static_cast<std::uint32_t>(pick));
        alive[pick] = false;
        --remaining;
        for (std::size_t m = 0; m < n; ++m) row[m] += w[pick * n + m];
      }
      std::sort(group.begin(), group.end());
      const long slots = static_cast<long>(group.size()) * res;
      out.push_back({job.id, std::move(group), slots});
    }
  }
  for (std::size_t m = 0; m < n; ++m)
    if (alive[m]) out.push_back({job.id, {static_cast<std::uint32_t>(m)}, res});
  return out;
}

inline std::size_t estimate_pod_count(std::span<const Job> jobs, long pod_slot_capacity) {
  if (pod_slot_capacity <= 0) throw ConfigError("estimate_pod_count: pod capacity must be > 0");
  long total = 0;
  for (const Job& j : jobs) total += j.slot_demand();
  return static_cast<std::size_t>((total + pod_slot_capacity - 1) / pod_slot_capacity);
}

/// Which cluster a job joins: the one whose center gives the smallest
/// job_distance (most dissimilar pattern) or the largest (most similar).
enum class MembershipRule { kMostDissimilar, kMostSimilar };

inline const char* to_string(MembershipRule r) {
  return r == MembershipRule::kMostDissimilar ? "most_dissimilar" : "most_similar";
}

inline MembershipRule parse_membership_rule(std::string_view s) {
  if (s == "most_dissimilar" || s == "dissimilar") return MembershipRule::kMostDissimilar;
  if (s == "most_similar" || s == "similar") return MembershipRule::kMostSimilar;
  throw ConfigError("unknown membership rule '" + std::string(s) + "'");
}

/// Job groups destined for one pod each, plus the jobs that fit nowhere.
/// Entries are positions in the clustered job list.
struct PodClusters {
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<std::size_t> overflow;
  std::vector<std::vector<double>> centers;  ///< mean pattern per cluster, empty if unused
};

namespace detail {

inline PodClusters assign_to_clusters(const std::vector<std::vector<double>>& patterns,
                                      const std::vector<long>& demand,
                                      std::span<const std::size_t> seeds,
                                      const std::vector<long>& capacity, MembershipRule rule) {
  const std::size_t n = patterns.size();
  const std::size_t n_pod = capacity.size();
  if (seeds.size() > n_pod) throw DomainError("cluster_jobs: more seeds than clusters");
  PodClusters out;
  out.clusters.assign(n_pod, {});
  out.centers.assign(n_pod, {});
  std::vector<std::vector<double>> sums(n_pod);
  std::vector<long> used(n_pod, 0);
  std::vector<bool> placed(n, false);

  auto join = [&](std::size_t c, std::size_t j) {
    if (sums[c].empty()) sums[c].assign(patterns[j].size(), 0.0);
    for (std::size_t t = 0; t < patterns[j].size(); ++t) sums[c][t] += patterns[j][t];
    out.clusters[c].push_back(j);
    used[c] += demand[j];
    placed[j] = true;
    const double size = static_cast<double>(out.clusters[c].size());
    out.centers[c].resize(sums[c].size());
    for (std::size_t t = 0; t < sums[c].size(); ++t) out.centers[c][t] = sums[c][t] / size;
  };

  for (std::size_t c = 0; c < seeds.size(); ++c) {
    const std::size_t j = seeds[c];
    if (j >= n) throw DomainError("cluster_jobs: seed index " + std::to_string(j) + " out of range");
    if (placed[j]) throw DomainError("cluster_jobs: duplicate seed " + std::to_string(j));
    if (demand[j] <= capacity[c]) join(c, j);
  }

  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < n; ++j)
    if (!placed[j]) order.push_back(j);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return demand[a] > demand[b]; });

  for (std::size_t j : order) {
    std::size_t best = n_pod;
    double best_d = 0.0;
    for (std::size_t c = 0; c < n_pod; ++c) {
      if (out.clusters[c].empty() || used[c] + demand[j] > capacity[c]) continue;
      const double d = job_distance(patterns[j], out.centers[c]);
      const bool better = best == n_pod ||
                          (rule == MembershipRule::kMostDissimilar ? d < best_d : d > best_d);
      if (better) {
        best = c;
        best_d = d;
      }
    }
    if (best == n_pod)
      for (std::size_t c = 0; c < n_pod; ++c)
        if (out.clusters[c].empty() && demand[j] <= capacity[c]) {
          best = c;
          break;
        }
    if (best == n_pod) out.overflow.push_back(j);
    else join(best, j);
  }
  return out;
}

}  // namespace detail

/// Clusters seeded from explicit job positions (one seed per cluster).
inline PodClusters cluster_jobs_seeded(std::span<const Job> jobs, std::span<const std::size_t> seeds,
                                       long pod_slot_capacity, std::size_t horizon,
                                       MembershipRule rule = MembershipRule::kMostDissimilar) {
  std::vector<std::vector<double>> patterns;
  std::vector<long> demand;
  for (const Job& j : jobs) {
    patterns.push_back(pattern_vector(j, horizon));
    demand.push_back(j.slot_demand());
  }
  return detail::assign_to_clusters(patterns, demand, seeds,
                                    std::vector<long>(seeds.size(), pod_slot_capacity), rule);
}

/// Revised k-means: k-means++ seeds on pattern vectors, then the remaining
/// jobs by descending slot demand, each into the feasible cluster chosen by
/// the membership rule. Centers are the member mean.
inline PodClusters cluster_jobs(std::span<const Job> jobs, std::size_t n_pod, long pod_slot_capacity,
                                std::size_t horizon, std::uint64_t seed,
                                MembershipRule rule = MembershipRule::kMostDissimilar) {
  if (jobs.empty()) {
    PodClusters out;
    out.clusters.assign(n_pod, {});
    out.centers.assign(n_pod, {});
    return out;
  }
  if (n_pod == 0) throw DomainError("cluster_jobs: zero pods for " + std::to_string(jobs.size()) + " jobs");
  std::vector<std::vector<double>> patterns;
  std::vector<long> demand;
  for (const Job& j : jobs) {
    patterns.push_back(pattern_vector(j, horizon));
    demand.push_back(j.slot_demand());
  }
  const auto seeds = graphkit::kmeans_pp_seed(std::span<const std::vector<double>>(patterns),
                                              std::min(n_pod, jobs.size()), seed);
  return detail::assign_to_clusters(patterns, demand, seeds,
                                    std::vector<long>(n_pod, pod_slot_capacity), rule);
}

/// Graph over the super-VMs of one job, weighted by their lifetime traffic
/// in both directions.
inline graphkit::WeightedGraph<double> super_vm_graph(const Job& job, std::span<const SuperVM> svms) {
  std::vector<std::size_t> owner(job.vm_count, svms.size());
  for (std::size_t i = 0; i < svms.size(); ++i)
    for (std::uint32_t m : svms[i].members) {
      if (m >= job.vm_count || owner[m] != svms.size())
        throw DomainError("super-VM graph: bad or repeated member " + std::to_string(m));
      owner[m] = i;
    }
  const std::size_t n = svms.size();
  std::vector<double> w(n * n, 0.0);
  const TrafficMatrix ref = referential_matrix(job);
  for (std::size_t a = 0; a < job.vm_count; ++a)
    for (std::size_t b = 0; b < job.vm_count; ++b) {
      const std::size_t x = owner[a], y = owner[b];
      if (x == n || y == n || x == y) continue;
      w[std::min(x, y) * n + std::max(x, y)] += ref(a, b);
    }
  graphkit::WeightedGraph<double> g(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      if (w[x * n + y] > 0.0) g.add_edge(x, y, w[x * n + y]);
  return g;
}

/// Splits a job's super-VMs into at most k_racks low-traffic-crossing sets.
/// Returns indices into svms.
inline std::vector<std::vector<std::size_t>> partition_into_racks(const Job& job,
                                                                  std::span<const SuperVM> svms,
                                                                  std::size_t k_racks) {
  if (k_racks < 1) throw ConfigError("partition_into_racks: K must be >= 1");
  if (svms.empty()) return {};
  const auto g = super_vm_graph(job, svms);
  return graphkit::min_k_cut(g, std::min(k_racks, svms.size())).blocks;
}

/// A job ready for rack packing.
struct JobPlan {
  std::size_t job = 0;  ///< position in the job list
  std::vector<SuperVM> super_vms;
  std::vector<std::vector<std::size_t>> sets;  ///< indices into super_vms
};

struct PackOutcome {
  bool placed = true;
  std::size_t split_sets = 0;        ///< sets spread over several racks
  std::size_t split_super_vms = 0;   ///< super-VMs broken up to single VMs
};

/// Rack packing inside one pod. Sets go, largest first, to the first rack in
/// the current order that can hold them; the order is re-sorted by ascending
/// used servers after every job. Inside a rack each super-VM takes the
/// fullest server that still fits it. A set no rack can hold is spread over
/// the emptiest racks.
class PodPacker {
 public:
  PodPacker(const FatTree& tree, std::uint32_t pod) : tree_(&tree), pod_(pod) {
    if (pod >= tree.pod_count()) throw DomainError("pod packer: unknown pod " + std::to_string(pod));
    order_.resize(tree.racks_per_pod());
    std::iota(order_.begin(), order_.end(), 0u);
  }

  std::span<const std::uint32_t> rack_order() const { return order_; }

  /// Places every VM of the job or nothing.
  PackOutcome place_job(const JobPlan& plan, Assignment& assignment, SlotLedger& ledger) {
    const std::uint32_t per_rack = tree_->servers_per_rack();
    const ServerId first = tree_->server(pod_, 0, 0);
    std::vector<int> free(tree_->servers_per_pod());
    for (std::size_t i = 0; i < free.size(); ++i) free[i] = ledger.free(first + static_cast<ServerId>(i));
    std::vector<std::uint32_t> order = order_;
    struct Staged {
      std::uint32_t vm;
      std::size_t server;
      int slots;
    };
    std::vector<Staged> staged;
    PackOutcome outcome;

    auto best_fit = [&](std::uint32_t rack, int slots) {
      std::size_t pick = free.size();
      for (std::uint32_t s = 0; s < per_rack; ++s) {
        const std::size_t i = static_cast<std::size_t>(rack) * per_rack + s;
        if (free[i] >= slots && (pick == free.size() || free[i] < free[pick])) pick = i;
      }
      return pick;
    };
    auto rack_free = [&](std::uint32_t rack) {
      int sum = 0;
      for (std::uint32_t s = 0; s < per_rack; ++s) sum += free[rack * per_rack + s];
      return sum;
    };
    auto put = [&](const SuperVM& sv, std::size_t server) {
      free[server] -= static_cast<int>(sv.slots);
      const int each = static_cast<int>(sv.slots / static_cast<long>(sv.members.size()));
      for (std::uint32_t m : sv.members) staged.push_back({m, server, each});
    };

    std::vector<std::size_t> set_order(plan.sets.size());
    std::iota(set_order.begin(), set_order.end(), 0);
    auto set_slots = [&](std::size_t s) {
      long sum = 0;
      for (std::size_t i : plan.sets[s]) sum += plan.super_vms[i].slots;
      return sum;
    };
    std::stable_sort(set_order.begin(), set_order.end(),
                     [&](std::size_t a, std::size_t b) { return set_slots(a) > set_slots(b); });

    for (std::size_t s : set_order) {
      std::vector<std::size_t> members = plan.sets[s];
      std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
        return plan.super_vms[a].slots > plan.super_vms[b].slots;
      });

      bool done = false;
      for (std::uint32_t rack : order) {
        const std::vector<int> saved = free;
        const std::size_t staged_before = staged.size();
        bool ok = true;
        for (std::size_t i : members) {
          const std::size_t server = best_fit(rack, static_cast<int>(plan.super_vms[i].slots));
          if (server == free.size()) {
            ok = false;
            break;
          }
          put(plan.super_vms[i], server);
        }
        if (ok) {
          done = true;
          break;
        }
        free = saved;
        staged.resize(staged_before);
      }

      if (!done) {
        ++outcome.split_sets;
        std::vector<std::uint32_t> roomy(order.begin(), order.end());
        std::stable_sort(roomy.begin(), roomy.end(),
                         [&](std::uint32_t a, std::uint32_t b) { return rack_free(a) > rack_free(b); });
        for (std::size_t i : members) {
          const SuperVM& sv = plan.super_vms[i];
          std::size_t server = free.size();
          for (std::uint32_t rack : roomy) {
            server = best_fit(rack, static_cast<int>(sv.slots));
            if (server != free.size()) break;
          }
          if (server != free.size()) {
            put(sv, server);
            continue;
          }
          ++outcome.split_super_vms;
          const long each = sv.slots / static_cast<long>(sv.members.size());
          for (std::uint32_t m : sv.members) {
            std::size_t target = free.size();
            for (std::uint32_t rack : roomy) {
              target = best_fit(rack, static_cast<int>(each));
              if (target != free.size()) break;
            }
            if (target == free.size()) return {false, outcome.split_sets, outcome.split_super_vms};
            put(SuperVM{sv.job_id, {m}, each}, target);
          }
        }
      }
    }

    std::vector<int> used_servers(tree_->racks_per_pod(), 0);
    std::vector<int> used_slots(tree_->racks_per_pod(), 0);
    for (std::uint32_t r = 0; r < tree_->racks_per_pod(); ++r)
      for (std::uint32_t x = 0; x < per_rack; ++x) {
        const int f = free[r * per_rack + x];
        const int u = ledger.capacity() - f;
        used_slots[r] += u;
        if (u > 0) ++used_servers[r];
      }
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (used_servers[a] != used_servers[b]) return used_servers[a] < used_servers[b];
      if (used_slots[a] != used_slots[b]) return used_slots[a] < used_slots[b];
      return a < b;
    });

    for (const Staged& st : staged) {
      const ServerId server = first + static_cast<ServerId>(st.server);
      ledger.take(server, st.slots);
      assignment.place(plan.job, st.vm, server);
    }
    order_ = std::move(order);
    return outcome;
  }

 private:
  const FatTree* tree_;
  std::uint32_t pod_;
  std::vector<std::uint32_t> order_;
};

/// Packs a cluster's jobs, in the given order, into one pod.
inline PackOutcome pack_cluster_into_pod(std::span<const JobPlan> plans, std::uint32_t pod,
                                         const FatTree& tree, SlotLedger& ledger,
                                         Assignment& assignment) {
  PodPacker packer(tree, pod);
  PackOutcome total;
  for (const JobPlan& p : plans) {
    const PackOutcome o = packer.place_job(p, assignment, ledger);
    total.split_sets += o.split_sets;
    total.split_super_vms += o.split_super_vms;
    if (!o.placed)
      throw InfeasibleError("pack: job at position " + std::to_string(p.job) + " does not fit pod " +
                            std::to_string(pod));
  }
  return total;
}

namespace detail {

inline void check_fits_datacenter(std::span<const Job> jobs, const FatTree& tree) {
  long total = 0;
  for (const Job& j : jobs) {
    if (j.vm_resource > static_cast<std::uint32_t>(tree.server_capacity()))
      throw InfeasibleError("job " + std::to_string(j.id) + " has VMs larger than a server");
    total += j.slot_demand();
  }
  if (total > tree.total_slots())
    throw InfeasibleError("datacenter overflow: " + std::to_string(total) + " slots requested, " +
                          std::to_string(tree.total_slots()) + " available");
}

inline ServerId first_fit(std::span<const ServerId> servers, const SlotLedger& ledger, long slots) {
  for (ServerId s : servers)
    if (ledger.fits(s, static_cast<int>(slots))) return s;
  return kUnassigned;
}

/// Super-VMs to the first server with room, VM by VM when a group fits nowhere.
inline void first_fit_super_vms(std::size_t job, std::span<const SuperVM> svms,
                                std::span<const ServerId> servers, SlotLedger& ledger,
                                Assignment& assignment) {
  for (const SuperVM& sv : svms) {
    const ServerId s = first_fit(servers, ledger, sv.slots);
    const long each = sv.slots / static_cast<long>(sv.members.size());
    if (s != kUnassigned) {
      ledger.take(s, static_cast<int>(sv.slots));
      for (std::uint32_t m : sv.members) assignment.place(job, m, s);
      continue;
    }
    for (std::uint32_t m : sv.members) {
      const ServerId t = first_fit(servers, ledger, each);
      if (t == kUnassigned)
        throw InfeasibleError("no server with " + std::to_string(each) + " free slots for job " +
                              std::to_string(sv.job_id) + " vm " + std::to_string(m));
      ledger.take(t, static_cast<int>(each));
      assignment.place(job, m, t);
    }
  }
}

inline std::vector<ServerId> all_servers(const FatTree& tree) {
  std::vector<ServerId> out(tree.server_count());
  std::iota(out.begin(), out.end(), ServerId{0});
  return out;
}

}  // namespace detail

/// Each VM, in (job, vm) order, to the lowest-numbered server with room.
inline Assignment greedy_assign(std::span<const Job> jobs, const FatTree& tree) {
  detail::check_fits_datacenter(jobs, tree);
  Assignment a(jobs);
  SlotLedger ledger(tree);
  const auto servers = detail::all_servers(tree);
  for (std::size_t j = 0; j < jobs.size(); ++j)
    detail::first_fit_super_vms(j, singleton_super_vms(jobs[j]), servers, ledger, a);
  return a;
}

/// Greedy over super-VMs instead of single VMs.
inline Assignment opt_greedy_assign(std::span<const Job> jobs, const FatTree& tree) {
  detail::check_fits_datacenter(jobs, tree);
  Assignment a(jobs);
  SlotLedger ledger(tree);
  const auto servers = detail::all_servers(tree);
  for (std::size_t j = 0; j < jobs.size(); ++j)
    detail::first_fit_super_vms(j, shrink_to_super_vms(jobs[j], tree.server_capacity()), servers,
                                ledger, a);
  return a;
}

struct EeaOptions {
  bool shrink = true;
  MembershipRule rule = MembershipRule::kMostDissimilar;
  std::size_t horizon = 0;  ///< pattern length; 0 uses the last transfer end + 1
};

struct EeaStats {
  std::vector<std::uint32_t> pods;  ///< pods picked for the clusters, in cluster order
  std::size_t oversized_jobs = 0;   ///< jobs larger than a pod, placed greedily
  std::size_t overflow_jobs = 0;    ///< jobs placed first-fit after clustering
  std::size_t split_sets = 0;
  std::size_t split_super_vms = 0;
};

/// The four-stage pipeline: shrink, cluster jobs into pods, cut each job
/// into rack sets, pack. With shrink disabled every VM is its own unit.
inline Assignment eea_pipeline(std::span<const Job> jobs, const FatTree& tree, std::uint64_t seed,
                               const EeaOptions& options = {}, EeaStats* stats = nullptr) {
  detail::check_fits_datacenter(jobs, tree);
  EeaStats local;
  EeaStats& st = stats ? *stats : local;
  st = EeaStats{};
  Assignment a(jobs);
  SlotLedger ledger(tree);
  const long pod_cap = tree.pod_slot_capacity();
  const auto all = detail::all_servers(tree);

  std::size_t horizon = options.horizon;
  if (horizon == 0)
    for (const Job& j : jobs)
      for (const Transfer& tr : j.transfers) horizon = std::max<std::size_t>(horizon, tr.end + 1u);
  horizon = std::max<std::size_t>(horizon, 1);

  auto units = [&](const Job& j) {
    return options.shrink ? shrink_to_super_vms(j, tree.server_capacity()) : singleton_super_vms(j);
  };

  std::vector<std::size_t> regular;
  long regular_slots = 0;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (jobs[j].slot_demand() > pod_cap) {
      ++st.oversized_jobs;
      detail::first_fit_super_vms(j, units(jobs[j]), all, ledger, a);
    } else {
      regular.push_back(j);
      regular_slots += jobs[j].slot_demand();
    }
  }

  std::vector<std::uint32_t> pods(tree.pod_count());
  std::iota(pods.begin(), pods.end(), 0u);
  auto pod_free = [&](std::uint32_t p) {
    long sum = 0;
    for (std::uint32_t i = 0; i < tree.servers_per_pod(); ++i)
      sum += ledger.free(tree.server(p, 0, 0) + i);
    return sum;
  };
  std::vector<long> free_by_pod(tree.pod_count());
  for (std::uint32_t p = 0; p < tree.pod_count(); ++p) free_by_pod[p] = pod_free(p);
  std::stable_sort(pods.begin(), pods.end(),
                   [&](std::uint32_t x, std::uint32_t y) { return free_by_pod[x] > free_by_pod[y]; });
  const std::size_t n_pod =
      std::min<std::size_t>((regular_slots + pod_cap - 1) / pod_cap, tree.pod_count());
  st.pods.assign(pods.begin(), pods.begin() + static_cast<std::ptrdiff_t>(n_pod));

  std::vector<std::size_t> overflow;
  if (!regular.empty()) {
    std::vector<std::vector<double>> patterns;
    std::vector<long> demand;
    for (std::size_t j : regular) {
      patterns.push_back(pattern_vector(jobs[j], horizon));
      demand.push_back(jobs[j].slot_demand());
    }
    const auto seeds = graphkit::kmeans_pp_seed(std::span<const std::vector<double>>(patterns),
                                                std::min(n_pod, regular.size()), seed);
    std::vector<long> capacity;
    for (std::uint32_t p : st.pods) capacity.push_back(free_by_pod[p]);
    const PodClusters clusters =
        detail::assign_to_clusters(patterns, demand, seeds, capacity, options.rule);

    for (std::size_t c = 0; c < clusters.clusters.size(); ++c) {
      PodPacker packer(tree, st.pods[c]);
      for (std::size_t local_j : clusters.clusters[c]) {
        const std::size_t j = regular[local_j];
        JobPlan plan{j, units(jobs[j]), {}};
        plan.sets = partition_into_racks(jobs[j], plan.super_vms, tree.racks_per_pod());
        const PackOutcome o = packer.place_job(plan, a, ledger);
        st.split_sets += o.split_sets;
        st.split_super_vms += o.split_super_vms;
        if (!o.placed) overflow.push_back(j);
      }
    }
    for (std::size_t local_j : clusters.overflow) overflow.push_back(regular[local_j]);
  }

  if (!overflow.empty()) {
    std::sort(overflow.begin(), overflow.end());
    std::vector<ServerId> order;
    std::vector<bool> chosen(tree.pod_count(), false);
    for (std::uint32_t p : st.pods) chosen[p] = true;
    auto add_pod = [&](std::uint32_t p) {
      for (std::uint32_t i = 0; i < tree.servers_per_pod(); ++i) order.push_back(tree.server(p, 0, 0) + i);
    };
    for (std::uint32_t p : st.pods) add_pod(p);
    for (std::uint32_t p = 0; p < tree.pod_count(); ++p)
      if (!chosen[p]) add_pod(p);
    for (std::size_t j : overflow) {
      ++st.overflow_jobs;
      detail::first_fit_super_vms(j, units(jobs[j]), order, ledger, a);
    }
  }
  return a;
}

inline Assignment opt_eea(std::span<const Job> jobs, const FatTree& tree, std::uint64_t seed,
                          MembershipRule rule = MembershipRule::kMostDissimilar,
                          std::size_t horizon = 0, EeaStats* stats = nullptr) {
  return eea_pipeline(jobs, tree, seed, {true, rule, horizon}, stats);
}

inline Assignment eea_assign(std::span<const Job> jobs, const FatTree& tree, std::uint64_t seed,
                             MembershipRule rule = MembershipRule::kMostDissimilar,
                             std::size_t horizon = 0, EeaStats* stats = nullptr) {
  return eea_pipeline(jobs, tree, seed, {false, rule, horizon}, stats);
}

}  // namespace greendcn
