#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "greendcn/assignment.hpp"
#include "greendcn/error.hpp"
#include "greendcn/placement.hpp"
#include "greendcn/power.hpp"
#include "greendcn/routing.hpp"
#include "greendcn/topology.hpp"
#include "greendcn/workload.hpp"

namespace greendcn {

enum class AssignStrategy { kGreedy, kOptGreedy, kEea, kOptEea };
enum class RouteStrategy { kSp, kEcmp, kEer };

inline const char* to_string(AssignStrategy s) {
  switch (s) {
    case AssignStrategy::kGreedy: return "greedy";
    case AssignStrategy::kOptGreedy: return "opt_greedy";
    case AssignStrategy::kEea: return "eea";
    case AssignStrategy::kOptEea: return "opt_eea";
  }
  return "?";
}

inline const char* to_string(RouteStrategy s) {
  switch (s) {
    case RouteStrategy::kSp: return "sp";
    case RouteStrategy::kEcmp: return "ecmp";
    case RouteStrategy::kEer: return "eer";
  }
  return "?";
}

inline AssignStrategy parse_assign_strategy(std::string_view s) {
  if (s == "greedy") return AssignStrategy::kGreedy;
  if (s == "opt_greedy") return AssignStrategy::kOptGreedy;
  if (s == "eea") return AssignStrategy::kEea;
  if (s == "opt_eea") return AssignStrategy::kOptEea;
  throw ConfigError("unknown assignment strategy '" + std::string(s) + "'");
}

inline RouteStrategy parse_route_strategy(std::string_view s) {
  if (s == "sp") return RouteStrategy::kSp;
  if (s == "ecmp") return RouteStrategy::kEcmp;
  if (s == "eer") return RouteStrategy::kEer;
  throw ConfigError("unknown routing strategy '" + std::string(s) + "'");
}

/// Display name such as "OptEEA-EER".
inline std::string scenario_name(AssignStrategy a, RouteStrategy r) {
  static constexpr const char* kAssign[] = {"Greedy", "OptGreedy", "EEA", "OptEEA"};
  static constexpr const char* kRoute[] = {"SP", "ECMP", "EER"};
  return std::string(kAssign[static_cast<int>(a)]) + "-" + kRoute[static_cast<int>(r)];
}

inline bool is_stochastic(AssignStrategy a, RouteStrategy r) {
  return a == AssignStrategy::kEea || a == AssignStrategy::kOptEea || r == RouteStrategy::kEcmp;
}

struct StrategyPair {
  AssignStrategy assign;
  RouteStrategy route;
};

/// The five combinations compared in the evaluation grid, baseline first.
inline const std::vector<StrategyPair>& strategy_pairs() {
  static const std::vector<StrategyPair> kPairs{
      {AssignStrategy::kGreedy, RouteStrategy::kSp},
      {AssignStrategy::kOptGreedy, RouteStrategy::kSp},
      {AssignStrategy::kGreedy, RouteStrategy::kEer},
      {AssignStrategy::kEea, RouteStrategy::kEer},
      {AssignStrategy::kOptEea, RouteStrategy::kEer},
  };
  return kPairs;
}

inline const std::string kBaselineScenario = "Greedy-SP";

struct Scenario {
  int k = 8;
  int server_capacity = 2;
  Workload workload;
  AssignStrategy assign = AssignStrategy::kGreedy;
  RouteStrategy route = RouteStrategy::kSp;
  PowerParams power = PowerParams::commodity();
  std::uint64_t seed = 0;
  MembershipRule rule = MembershipRule::kMostDissimilar;
  bool keep_loads = false;
  bool keep_plans = false;
  bool keep_assignment = false;
};

struct EnergyReport {
  std::string scenario;
  AssignStrategy assign = AssignStrategy::kGreedy;
  RouteStrategy route = RouteStrategy::kSp;
  int k = 0;
  std::uint64_t seed = 0;
  std::uint64_t workload_seed = 0;
  double utilization = 0.0;
  std::size_t horizon = 0;

  std::vector<double> per_timeslot_watts;
  double total = 0.0;  ///< watt-timeslots
  double tor = 0.0;
  double agg = 0.0;
  double core = 0.0;
  std::vector<std::uint32_t> active_switches;  ///< switches with non-zero load, per timeslot
  double runtime_ms = 0.0;
  std::vector<CapacityViolationEntry> violations;
  std::size_t escalations = 0;  ///< EER timeslots that needed a larger active set

  std::vector<LoadMap> loads;
  std::vector<RoutingPlan> plans;
  std::optional<Assignment> assignment;

  bool violated() const { return !violations.empty(); }
};

/// Equality on everything except the wall-clock runtime.
inline bool same_results(const EnergyReport& a, const EnergyReport& b) {
  auto viol_eq = [](const std::vector<CapacityViolationEntry>& x,
                    const std::vector<CapacityViolationEntry>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].timeslot != y[i].timeslot || x[i].switch_id != y[i].switch_id ||
          x[i].load_gbps != y[i].load_gbps)
        return false;
    return true;
  };
  return a.scenario == b.scenario && a.assign == b.assign && a.route == b.route && a.k == b.k &&
         a.seed == b.seed && a.workload_seed == b.workload_seed && a.utilization == b.utilization &&
         a.horizon == b.horizon && a.per_timeslot_watts == b.per_timeslot_watts &&
         a.total == b.total && a.tor == b.tor && a.agg == b.agg && a.core == b.core &&
         a.active_switches == b.active_switches && viol_eq(a.violations, b.violations) &&
         a.escalations == b.escalations && a.loads == b.loads && a.assignment == b.assignment;
}

inline Assignment assign_vms(AssignStrategy s, std::span<const Job> jobs, const FatTree& tree,
                             std::uint64_t seed, MembershipRule rule, std::size_t horizon) {
  switch (s) {
    case AssignStrategy::kGreedy: return greedy_assign(jobs, tree);
    case AssignStrategy::kOptGreedy: return opt_greedy_assign(jobs, tree);
    case AssignStrategy::kEea: return eea_assign(jobs, tree, seed, rule, horizon);
    case AssignStrategy::kOptEea: return opt_eea(jobs, tree, seed, rule, horizon);
  }
  throw ConfigError("unknown assignment strategy");
}

/// ToRs of racks that host at least one VM.
inline std::vector<SwitchId> occupied_tors(const Assignment& a, const FatTree& tree) {
  std::vector<bool> mark(tree.switch_count(), false);
  for (std::size_t j = 0; j < a.job_count(); ++j)
    for (ServerId s : a.hosts(j))
      if (s != kUnassigned) mark[tree.tor_of(s)] = true;
  std::vector<SwitchId> out;
  for (SwitchId s = 0; s < mark.size(); ++s)
    if (mark[s]) out.push_back(s);
  return out;
}

/// Assigns once, then routes every timeslot and charges each switch by its
/// load. Baseline routings record overloads; EER treats them as failures.
inline EnergyReport run_scenario(const Scenario& sc) {
  const auto t0 = std::chrono::steady_clock::now();
  const FatTree tree(sc.k, sc.server_capacity);
  const Workload& w = sc.workload;
  for (const Job& j : w.jobs) validate_job(j, w.horizon);

  EnergyReport rep;
  rep.scenario = scenario_name(sc.assign, sc.route);
  rep.assign = sc.assign;
  rep.route = sc.route;
  rep.k = sc.k;
  rep.seed = sc.seed;
  rep.workload_seed = w.seed;
  rep.utilization = w.config.utilization;
  rep.horizon = w.horizon;

  Assignment a;
  try {
    a = assign_vms(sc.assign, w.jobs, tree, sc.seed, sc.rule, w.horizon);
  } catch (const InfeasibleError& e) {
    throw ScenarioError("assignment", ScenarioError::kNoTimeslot, e.what());
  }
  const auto problems = validate_assignment(w.jobs, a, tree);
  if (!problems.empty()) throw ScenarioError("assignment", ScenarioError::kNoTimeslot, problems.front());
  const auto tors = occupied_tors(a, tree);

  std::vector<Layer> layer(tree.switch_count());
  for (SwitchId s = 0; s < tree.switch_count(); ++s) layer[s] = tree.layer(s);

  rep.per_timeslot_watts.reserve(w.horizon);
  rep.active_switches.reserve(w.horizon);
  for (std::size_t t = 0; t < w.horizon; ++t) {
    const DemandSet ds = demands_at(w.jobs, a, t);
    RoutingPlan plan;
    switch (sc.route) {
      case RouteStrategy::kSp: plan = sp_route(ds, tree, sc.power, OnViolation::kRecord); break;
      case RouteStrategy::kEcmp:
        plan = ecmp_route(ds, tree, sc.seed, sc.power, OnViolation::kRecord);
        break;
      case RouteStrategy::kEer:
        try {
          EerResult r = eer(ds, tree, sc.power, tors);
          if (r.escalated) ++rep.escalations;
          plan = std::move(r.plan);
        } catch (const InfeasibleError& e) {
          throw ScenarioError("routing", t, e.what());
        }
        break;
    }
    double watts = 0.0;
    std::uint32_t active = 0;
    for (SwitchId s = 0; s < tree.switch_count(); ++s) {
      const double x = plan.loads.loads[s];
      if (x <= 0.0) continue;
      const double p = switch_power_uncapped(x, sc.power);
      ++active;
      watts += p;
      switch (layer[s]) {
        case Layer::kTor: rep.tor += p; break;
        case Layer::kAggregation: rep.agg += p; break;
        case Layer::kCore: rep.core += p; break;
      }
    }
    rep.per_timeslot_watts.push_back(watts);
    rep.active_switches.push_back(active);
    rep.total += watts;
    rep.violations.insert(rep.violations.end(), plan.violations.begin(), plan.violations.end());
    if (sc.keep_loads) rep.loads.push_back(plan.loads);
    if (sc.keep_plans) rep.plans.push_back(std::move(plan));
  }
  if (sc.keep_assignment) rep.assignment = std::move(a);
  rep.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// Ratio with 0/0 read as 1.
inline double energy_ratio(double value, double baseline) {
  if (baseline == 0.0) return value == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return value / baseline;
}

/// Each report's ratio to the baseline run on the same workload (matched by
/// utilization and workload seed).
inline std::vector<double> ratios_to_baseline(std::span<const EnergyReport> reports,
                                              const std::string& baseline = kBaselineScenario) {
  std::map<std::pair<double, std::uint64_t>, double> base;
  for (const EnergyReport& r : reports)
    if (r.scenario == baseline) base[{r.utilization, r.workload_seed}] = r.total;
  std::vector<double> out;
  for (const EnergyReport& r : reports) {
    const auto it = base.find({r.utilization, r.workload_seed});
    if (it == base.end())
      throw DomainError("compare: no " + baseline + " report for utilization " +
                        std::to_string(r.utilization) + " workload seed " +
                        std::to_string(r.workload_seed));
    out.push_back(energy_ratio(r.total, it->second));
  }
  return out;
}

struct ComparisonRow {
  std::string scenario;
  std::size_t runs = 0;
  double mean_total = 0.0;
  double stdev_total = 0.0;  ///< sample standard deviation, 0 for one run
  double mean_ratio = 0.0;
  double stdev_ratio = 0.0;
};

namespace detail {

inline std::pair<double, double> mean_stdev(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

}  // namespace detail

/// One row per scenario name, in first-appearance order.
inline std::vector<ComparisonRow> compare(std::span<const EnergyReport> reports,
                                          const std::string& baseline = kBaselineScenario) {
  const auto ratios = ratios_to_baseline(reports, baseline);
  std::vector<std::string> names;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    auto [it, fresh] = groups.try_emplace(reports[i].scenario);
    if (fresh) names.push_back(reports[i].scenario);
    it->second.first.push_back(reports[i].total);
    it->second.second.push_back(ratios[i]);
  }
  std::vector<ComparisonRow> out;
  for (const std::string& n : names) {
    const auto& [totals, rs] = groups[n];
    ComparisonRow row;
    row.scenario = n;
    row.runs = totals.size();
    std::tie(row.mean_total, row.stdev_total) = detail::mean_stdev(totals);
    std::tie(row.mean_ratio, row.stdev_ratio) = detail::mean_stdev(rs);
    out.push_back(row);
  }
  return out;
}

inline std::vector<double> default_utilizations() {
  std::vector<double> out;
  for (int i = 0; i < 10; ++i) out.push_back(0.05 + 0.10 * i);
  return out;
}

struct SweepConfig {
  WorkloadConfig workload;  ///< utilization is overridden per grid point
  std::vector<double> utilizations = default_utilizations();
  std::size_t repeats = 5;
  std::uint64_t base_seed = 1;  ///< repeat r uses base_seed + r
  PowerParams power = PowerParams::commodity();
  MembershipRule rule = MembershipRule::kMostDissimilar;
  unsigned threads = 1;
};

struct SweepRow {
  std::string scenario;
  double utilization = 0.0;
  std::uint64_t seed = 0;
  double total_energy_wt = 0.0;
  double ratio_to_baseline = 0.0;
  double runtime_ms = 0.0;
  std::size_t violations = 0;
};

/// All five strategy pairs on one generated workload.
inline std::vector<EnergyReport> run_grid_cell(const SweepConfig& cfg, double utilization,
                                               std::uint64_t seed) {
  WorkloadConfig wc = cfg.workload;
  wc.utilization = utilization;
  const Workload w = make_workload(wc, seed);
  std::vector<EnergyReport> out;
  for (const StrategyPair& p : strategy_pairs()) {
    Scenario sc;
    sc.k = wc.k;
    sc.server_capacity = wc.server_capacity;
    sc.workload = w;
    sc.assign = p.assign;
    sc.route = p.route;
    sc.power = cfg.power;
    sc.seed = seed;
    sc.rule = cfg.rule;
    out.push_back(run_scenario(sc));
  }
  return out;
}

/// Utilization x repeat x strategy grid, rows ordered by (utilization,
/// repeat, strategy pair). Cells run on up to cfg.threads threads.
inline std::vector<SweepRow> sweep(const SweepConfig& cfg) {
  validate_workload_config(cfg.workload);
  struct Cell {
    double u;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (double u : cfg.utilizations)
    for (std::size_t r = 0; r < cfg.repeats; ++r) cells.push_back({u, cfg.base_seed + r});
  std::vector<std::vector<EnergyReport>> results(cells.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        results[i] = run_grid_cell(cfg, cells[i].u, cells[i].seed);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cells.size())));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto ratios = ratios_to_baseline(results[i]);
    for (std::size_t s = 0; s < results[i].size(); ++s) {
      const EnergyReport& r = results[i][s];
      rows.push_back({r.scenario, cells[i].u, cells[i].seed, r.total, ratios[s], r.runtime_ms,
                      r.violations.size()});
    }
  }
  return rows;
}

/// Spearman rank correlation with average ranks for ties.
inline double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("spearman: need two equal-length samples");
  auto ranks = [](std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t q = i; q <= j; ++q) r[idx[q]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const auto [mx, sx] = detail::mean_stdev(rx);
  const auto [my, sy] = detail::mean_stdev(ry);
  if (sx == 0.0 || sy == 0.0) return 0.0;
  double cov = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) cov += (rx[i] - mx) * (ry[i] - my);
  cov /= static_cast<double>(rx.size() - 1);
  return cov / (sx * sy);
}

}  // namespace greendcn
