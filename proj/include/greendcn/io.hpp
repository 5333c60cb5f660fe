#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "greendcn/error.hpp"
#include "greendcn/simengine.hpp"
#include "greendcn/workload.hpp"

namespace greendcn::io {

using nlohmann::json;

inline constexpr int kWorkloadVersion = 1;
inline constexpr int kReportVersion = 1;
inline constexpr const char* kWorkloadFormat = "greendcn-workload";
inline constexpr const char* kReportFormat = "greendcn-report";

// Workload files

inline json to_json(const WorkloadConfig& c) {
  return {{"k", c.k},
          {"server_capacity", c.server_capacity},
          {"horizon", c.horizon},
          {"utilization", c.utilization},
          {"traffic_mean_mbps", c.traffic_mean_mbps},
          {"traffic_variance", c.traffic_variance},
          {"vm_mean", c.vm_mean},
          {"vm_stdev", c.vm_stdev},
          {"window_min_fraction", c.window_min_fraction},
          {"window_max_fraction", c.window_max_fraction}};
}

inline WorkloadConfig workload_config_from_json(const json& j) {
  WorkloadConfig c;
  c.k = j.value("k", c.k);
  c.server_capacity = j.value("server_capacity", c.server_capacity);
  c.horizon = j.value("horizon", c.horizon);
  c.utilization = j.value("utilization", c.utilization);
  c.traffic_mean_mbps = j.value("traffic_mean_mbps", c.traffic_mean_mbps);
  c.traffic_variance = j.value("traffic_variance", c.traffic_variance);
  c.vm_mean = j.value("vm_mean", c.vm_mean);
  c.vm_stdev = j.value("vm_stdev", c.vm_stdev);
  c.window_min_fraction = j.value("window_min_fraction", c.window_min_fraction);
  c.window_max_fraction = j.value("window_max_fraction", c.window_max_fraction);
  return c;
}

inline json to_json(const Workload& w) {
  json jobs = json::array();
  for (const Job& job : w.jobs) {
    json transfers = json::array();
    for (const Transfer& tr : job.transfers) {
      const auto d = tr.matrix.data();
      transfers.push_back({{"start", tr.start},
                           {"end", tr.end},
                           {"matrix", std::vector<double>(d.begin(), d.end())}});
    }
    jobs.push_back({{"id", job.id},
                    {"vm_count", job.vm_count},
                    {"vm_resource", job.vm_resource},
                    {"transfers", std::move(transfers)}});
  }
  return {{"format", kWorkloadFormat},
          {"version", kWorkloadVersion},
          {"horizon", w.horizon},
          {"seed", w.seed},
          {"config", to_json(w.config)},
          {"jobs", std::move(jobs)}};
}

inline Workload workload_from_json(const json& j) {
  try {
    if (j.value("format", std::string()) != kWorkloadFormat)
      throw ConfigError("workload file: missing or wrong format tag");
    if (j.at("version").get<int>() != kWorkloadVersion)
      throw ConfigError("workload file: unsupported version " + j.at("version").dump());
    Workload w;
    w.horizon = j.at("horizon").get<std::size_t>();
    w.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("config")) w.config = workload_config_from_json(j.at("config"));
    for (const json& jj : j.at("jobs")) {
      Job job;
      job.id = jj.at("id").get<std::uint32_t>();
      job.vm_count = jj.at("vm_count").get<std::uint32_t>();
      job.vm_resource = jj.value("vm_resource", 1u);
      for (const json& tj : jj.at("transfers")) {
        Transfer tr;
        tr.start = tj.at("start").get<std::uint32_t>();
        tr.end = tj.at("end").get<std::uint32_t>();
        tr.matrix = TrafficMatrix(job.vm_count, tj.at("matrix").get<std::vector<double>>());
        job.transfers.push_back(std::move(tr));
      }
      validate_job(job, w.horizon);
      w.jobs.push_back(std::move(job));
    }
    return w;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("workload file: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

inline void save_workload(const Workload& w, const std::string& path) {
  write_file(path, to_json(w).dump(1) + "\n");
}

inline Workload load_workload(const std::string& path) {
  return workload_from_json(parse_json(read_file(path), "workload file '" + path + "'"));
}

// Reports

inline json to_json(const EnergyReport& r) {
  json viol = json::array();
  for (const auto& v : r.violations)
    viol.push_back({{"timeslot", v.timeslot}, {"switch", v.switch_id}, {"load_gbps", v.load_gbps}});
  return {{"format", kReportFormat},
          {"version", kReportVersion},
          {"scenario", r.scenario},
          {"assign", to_string(r.assign)},
          {"route", to_string(r.route)},
          {"k", r.k},
          {"seed", r.seed},
          {"workload_seed", r.workload_seed},
          {"utilization", r.utilization},
          {"horizon", r.horizon},
          {"total_energy_wt", r.total},
          {"breakdown", {{"tor", r.tor}, {"agg", r.agg}, {"core", r.core}}},
          {"per_timeslot_watts", r.per_timeslot_watts},
          {"active_switches", r.active_switches},
          {"runtime_ms", r.runtime_ms},
          {"escalations", r.escalations},
          {"violations", std::move(viol)}};
}

inline EnergyReport report_from_json(const json& j) {
  try {
    if (j.value("format", std::string()) != kReportFormat)
      throw ConfigError("report file: missing or wrong format tag");
    if (j.at("version").get<int>() != kReportVersion)
      throw ConfigError("report file: unsupported version " + j.at("version").dump());
    EnergyReport r;
    r.scenario = j.at("scenario").get<std::string>();
    r.assign = parse_assign_strategy(j.at("assign").get<std::string>());
    r.route = parse_route_strategy(j.at("route").get<std::string>());
    r.k = j.at("k").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.workload_seed = j.at("workload_seed").get<std::uint64_t>();
    r.utilization = j.at("utilization").get<double>();
    r.horizon = j.at("horizon").get<std::size_t>();
    r.total = j.at("total_energy_wt").get<double>();
    r.tor = j.at("breakdown").at("tor").get<double>();
    r.agg = j.at("breakdown").at("agg").get<double>();
    r.core = j.at("breakdown").at("core").get<double>();
    r.per_timeslot_watts = j.at("per_timeslot_watts").get<std::vector<double>>();
    r.active_switches = j.at("active_switches").get<std::vector<std::uint32_t>>();
    r.runtime_ms = j.at("runtime_ms").get<double>();
    r.escalations = j.value("escalations", std::size_t{0});
    for (const json& v : j.at("violations"))
      r.violations.push_back({v.at("timeslot").get<std::size_t>(), v.at("switch").get<std::size_t>(),
                              v.at("load_gbps").get<double>()});
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("report file: ") + e.what());
  }
}

inline void save_report(const EnergyReport& r, const std::string& path) {
  write_file(path, to_json(r).dump(1) + "\n");
}

inline EnergyReport load_report(const std::string& path) {
  return report_from_json(parse_json(read_file(path), "report file '" + path + "'"));
}

// Flat tables

inline const char* kFlatHeader =
    "scenario,utilization,seed,total_energy_wt,ratio_to_baseline,runtime_ms,violations";

inline std::string format_double(double x) {
  std::ostringstream ss;
  ss << std::setprecision(17) << x;
  return ss.str();
}

inline void write_flat_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kFlatHeader << "\n";
  for (const SweepRow& r : rows)
    out << r.scenario << ',' << format_double(r.utilization) << ',' << r.seed << ','
        << format_double(r.total_energy_wt) << ',' << format_double(r.ratio_to_baseline) << ','
        << format_double(r.runtime_ms) << ',' << r.violations << "\n";
}

inline std::vector<SweepRow> flat_rows(std::span<const EnergyReport> reports,
                                       const std::string& baseline = kBaselineScenario) {
  const auto ratios = ratios_to_baseline(reports, baseline);
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const EnergyReport& r = reports[i];
    rows.push_back({r.scenario, r.utilization, r.seed, r.total, ratios[i], r.runtime_ms,
                    r.violations.size()});
  }
  return rows;
}

inline void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "scenario,runs,mean_total_energy_wt,stdev_total_energy_wt,mean_ratio,stdev_ratio\n";
  for (const ComparisonRow& r : rows)
    out << r.scenario << ',' << r.runs << ',' << format_double(r.mean_total) << ','
        << format_double(r.stdev_total) << ',' << format_double(r.mean_ratio) << ','
        << format_double(r.stdev_ratio) << "\n";
}

/// Rows of (job, vm, server, pod, rack).
inline void write_assignment_csv(std::ostream& out, std::span<const Job> jobs, const Assignment& a,
                                 const FatTree& tree) {
  out << "job,vm,server,pod,rack\n";
  for (std::size_t j = 0; j < a.job_count(); ++j)
    for (std::size_t m = 0; m < a.vm_count(j); ++m) {
      const ServerId s = a.host(j, m);
      const ServerLocation loc = tree.locate(s);
      out << jobs[j].id << ',' << m << ',' << s << ',' << loc.pod << ',' << loc.rack << "\n";
    }
}

/// Rows of (timeslot, src, dst, rate, path); the path is a space-separated
/// switch list.
inline void write_routing_csv(std::ostream& out, std::span<const RoutingPlan> plans) {
  out << "timeslot,src,dst,rate_mbps,path\n";
  for (const RoutingPlan& p : plans)
    for (std::size_t i = 0; i < p.demands.size(); ++i) {
      out << p.timeslot << ',' << p.demands[i].src << ',' << p.demands[i].dst << ','
          << format_double(p.demands[i].rate_mbps) << ',';
      for (std::size_t h = 0; h < p.paths[i].size(); ++h) out << (h ? " " : "") << p.paths[i][h];
      out << "\n";
    }
}

inline json topology_summary(const FatTree& tree) {
  return {{"k", tree.k()},
          {"pods", tree.pod_count()},
          {"switches", tree.switch_count()},
          {"tor", tree.rack_count()},
          {"aggregation", tree.pod_count() * tree.aggs_per_pod()},
          {"core", tree.core_count()},
          {"servers", tree.server_count()},
          {"server_capacity", tree.server_capacity()},
          {"total_slots", tree.total_slots()}};
}

}  // namespace greendcn::io
