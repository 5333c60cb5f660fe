#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "greendcn/error.hpp"
#include "greendcn/job.hpp"
#include "greendcn/placement.hpp"
#include "greendcn/topology.hpp"

namespace greendcn {

/// Distance reported for identical pattern vectors, where 1/||a - b|| is
/// singular.
inline constexpr double kDistMax = 1e12;

struct WorkloadConfig {
  int k = 8;
  int server_capacity = 2;
  std::size_t horizon = 100;
  double utilization = 0.5;         ///< fraction of all server slots requested
  double traffic_mean_mbps = 50.0;
  double traffic_variance = 1.0;    ///< (Mbps)^2
  double vm_mean = 0.0;             ///< 0 selects K = servers per rack
  double vm_stdev = 0.0;            ///< 0 selects 0.5 K
  double window_min_fraction = 0.3; ///< transfer length bounds, fraction of horizon
  double window_max_fraction = 0.6;

  friend bool operator==(const WorkloadConfig&, const WorkloadConfig&) = default;
};

struct Workload {
  std::size_t horizon = 100;
  std::uint64_t seed = 0;
  WorkloadConfig config;
  std::vector<Job> jobs;

  friend bool operator==(const Workload&, const Workload&) = default;
};

inline void validate_workload_config(const WorkloadConfig& c) {
  if (!(c.utilization >= 0.0 && c.utilization <= 1.0))
    throw ConfigError("workload: utilization must be in [0, 1], got " + std::to_string(c.utilization));
  if (c.horizon < 1) throw ConfigError("workload: horizon must be >= 1");
  if (!(c.traffic_variance >= 0.0)) throw ConfigError("workload: traffic variance must be >= 0");
  if (!(c.window_min_fraction > 0.0 && c.window_min_fraction <= c.window_max_fraction &&
        c.window_max_fraction <= 1.0))
    throw ConfigError("workload: window fractions must satisfy 0 < min <= max <= 1");
  if (c.vm_mean < 0.0 || c.vm_stdev < 0.0) throw ConfigError("workload: negative VM count moments");
}

/// Synthetic jobs: VM counts ~ N(K, 0.5K) re-drawn below 2 and capped at a
/// pod, one transfer per job with uniform start and a length drawn from the
/// window fractions (truncated at the horizon), pairwise rates
/// ~ N(mean, variance) clamped at 0. Jobs are added until the requested slots
/// reach utilization x total slots. Job ids equal their list position.
inline std::vector<Job> generate_workload(const WorkloadConfig& cfg, std::uint64_t seed) {
  validate_workload_config(cfg);
  const FatTree tree(cfg.k, cfg.server_capacity);
  const long total = tree.total_slots();
  const double target = cfg.utilization * static_cast<double>(total);
  const double k_rack = static_cast<double>(tree.servers_per_rack());
  const double vm_mean = cfg.vm_mean > 0.0 ? cfg.vm_mean : k_rack;
  const double vm_stdev = cfg.vm_stdev > 0.0 ? cfg.vm_stdev : 0.5 * k_rack;
  const long pod_vms = tree.pod_slot_capacity();

  const auto r = static_cast<long>(cfg.horizon);
  const long len_lo = std::max<long>(1, std::lround(std::ceil(cfg.window_min_fraction * r)));
  const long len_hi = std::max<long>(len_lo, std::lround(std::floor(cfg.window_max_fraction * r)));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> vm_dist(vm_mean, vm_stdev);
  std::normal_distribution<double> rate_dist(cfg.traffic_mean_mbps, std::sqrt(cfg.traffic_variance));
  std::uniform_int_distribution<long> start_dist(0, r - 1);
  std::uniform_int_distribution<long> len_dist(len_lo, len_hi);

  std::vector<Job> jobs;
  long requested = 0;
  while (static_cast<double>(requested) < target) {
    long n = 0;
    for (int tries = 0; n < 2; ++tries) {
      if (tries > 100000) throw ConfigError("workload: VM count distribution never yields >= 2");
      n = std::lround(vm_dist(rng));
    }
    n = std::min(n, pod_vms);
    n = std::min(n, total - requested);
    if (n < 2) break;

    Job job;
    job.id = static_cast<std::uint32_t>(jobs.size());
    job.vm_count = static_cast<std::uint32_t>(n);
    Transfer tr;
    const long start = start_dist(rng);
    const long len = len_dist(rng);
    tr.start = static_cast<std::uint32_t>(start);
    tr.end = static_cast<std::uint32_t>(std::min(start + len - 1, r - 1));
    tr.matrix = TrafficMatrix(static_cast<std::size_t>(n));
    for (std::size_t a = 0; a < static_cast<std::size_t>(n); ++a)
      for (std::size_t b = 0; b < static_cast<std::size_t>(n); ++b)
        if (a != b) tr.matrix(a, b) = std::max(0.0, rate_dist(rng));
    job.transfers.push_back(std::move(tr));
    requested += n;
    jobs.push_back(std::move(job));
  }
  return jobs;
}

inline Workload make_workload(const WorkloadConfig& cfg, std::uint64_t seed) {
  return Workload{cfg.horizon, seed, cfg, generate_workload(cfg, seed)};
}

/// Sum of the transfer matrices active at t (zero outside every window).
inline TrafficMatrix traffic_at(const Job& job, std::size_t t) {
  TrafficMatrix m(job.vm_count);
  for (const Transfer& tr : job.transfers)
    if (tr.active_at(t)) m += tr.matrix;
  return m;
}

/// Lifetime VM-to-VM traffic: each transfer matrix weighted by its window
/// length. Background traffic is taken as zero.
inline TrafficMatrix referential_matrix(const Job& job) {
  TrafficMatrix ref(job.vm_count);
  for (const Transfer& tr : job.transfers) {
    TrafficMatrix w = tr.matrix;
    w *= static_cast<double>(tr.length());
    ref += w;
  }
  return ref;
}

/// Per-timeslot average pairwise traffic: total active rate / (n^2 / 2)
/// inside transfer windows, epsilon elsewhere.
inline std::vector<double> pattern_vector(const Job& job, std::size_t horizon, double epsilon = 0.0) {
  std::vector<double> v(horizon, 0.0);
  std::vector<bool> active(horizon, false);
  const double n = static_cast<double>(job.vm_count);
  const double denom = n * n / 2.0;
  for (const Transfer& tr : job.transfers) {
    const double avg = tr.matrix.sum() / denom;
    for (std::size_t t = tr.start; t <= tr.end && t < horizon; ++t) {
      v[t] += avg;
      active[t] = true;
    }
  }
  for (std::size_t t = 0; t < horizon; ++t)
    if (!active[t]) v[t] = epsilon;
  return v;
}

/// Inverse L2 separation of two pattern vectors; similar patterns are "far".
inline double job_distance(std::span<const double> a, std::span<const double> b,
                           double dist_max = kDistMax) {
  if (a.size() != b.size())
    throw DomainError("job_distance: length mismatch " + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()));
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
  const double norm = std::sqrt(sq);
  if (norm == 0.0) return dist_max;
  return std::min(dist_max, 1.0 / norm);
}

struct Demand {
  ServerId src;
  ServerId dst;
  double rate_mbps;

  friend bool operator==(const Demand&, const Demand&) = default;
};

struct DemandSet {
  std::size_t timeslot = 0;
  std::vector<Demand> demands;  ///< sorted by (src, dst), one entry per server pair
};

/// Server-to-server demands at timeslot t. Traffic between co-hosted VMs never
/// reaches the network; rates between the same server pair are merged.
inline DemandSet demands_at(std::span<const Job> jobs, const Assignment& assignment, std::size_t t) {
  if (assignment.job_count() != jobs.size())
    throw ConfigError("demands_at: assignment covers " + std::to_string(assignment.job_count()) +
                      " jobs, workload has " + std::to_string(jobs.size()));
  std::vector<std::pair<std::uint64_t, double>> flows;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const Job& job = jobs[j];
    const auto hosts = assignment.hosts(j);
    for (std::size_t m = 0; m < hosts.size(); ++m)
      if (hosts[m] == kUnassigned)
        throw ConfigError("demands_at: job " + std::to_string(job.id) + " vm " + std::to_string(m) +
                          " is unassigned");
    for (const Transfer& tr : job.transfers) {
      if (!tr.active_at(t)) continue;
      for (std::size_t a = 0; a < job.vm_count; ++a)
        for (std::size_t b = 0; b < job.vm_count; ++b) {
          const double rate = tr.matrix(a, b);
          if (rate <= 0.0 || hosts[a] == hosts[b]) continue;
          flows.emplace_back((static_cast<std::uint64_t>(hosts[a]) << 32) | hosts[b], rate);
        }
    }
  }
  std::stable_sort(flows.begin(), flows.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  DemandSet out;
  out.timeslot = t;
  for (const auto& [key, rate] : flows) {
    const auto src = static_cast<ServerId>(key >> 32);
    const auto dst = static_cast<ServerId>(key & 0xffffffffu);
    if (!out.demands.empty() && out.demands.back().src == src && out.demands.back().dst == dst)
      out.demands.back().rate_mbps += rate;
    else
      out.demands.push_back({src, dst, rate});
  }
  return out;
}

}  // namespace greendcn
