// greendcn command-line tool: workload generation, scenario runs,
// comparisons and sweeps.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "greendcn/config.hpp"
#include "greendcn/io.hpp"
#include "greendcn/simengine.hpp"

using namespace greendcn;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

// Values from a key=value file fill every option the command line left unset.
void apply_config_file(CLI::App& sub, const std::string& path) {
  const auto kv = config::parse_key_values(io::read_file(path));
  for (const auto& [raw_key, value] : kv) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config") throw ConfigError("config: 'config' cannot be set from a config file");
    CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr) throw ConfigError("config: unknown key '" + raw_key + "' for '" + sub.get_name() + "'");
    if (opt->count() > 0) continue;
    try {
      opt->add_result(value);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigError("config: bad value for '" + raw_key + "': " + e.what());
    }
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  io::write_file(path, text);
}

std::string energy_line(const std::string& label, double watt_slots, double timeslot_seconds, bool joules) {
  std::ostringstream ss;
  ss << label << ": " << io::format_double(watt_slots) << " watt-timeslots";
  if (joules) ss << " (" << io::format_double(watt_slots * timeslot_seconds) << " J)";
  ss << "\n";
  return ss.str();
}

struct GenArgs {
  int k = 8;
  int server_capacity = 2;
  double utilization = 0.5;
  std::size_t horizon = 100;
  std::uint64_t seed = 1;
  std::string out = "-";
};

struct RunArgs {
  std::string workload;
  std::string assign = "opt_eea";
  std::string route = "eer";
  int k = 0;
  std::uint64_t seed = 1;
  std::string rule = "most_dissimilar";
  std::string out = "-";
  std::string assignment_csv;
  std::string routing_csv;
};

struct CompareArgs {
  std::vector<std::string> reports;
  std::string baseline;
  std::string out = "-";
  std::string flat;
};

struct SweepArgs {
  int k = 8;
  int server_capacity = 2;
  std::size_t horizon = 100;
  std::vector<double> utilizations = default_utilizations();
  std::size_t repeats = 5;
  std::uint64_t base_seed = 1;
  std::string rule = "most_dissimilar";
  unsigned threads = 0;
  std::string out = "sweep_out";
};

struct Common {
  std::string config;
  double timeslot_seconds = 60.0;
  bool joules = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "key=value file; command-line flags take precedence");
  sub->add_option("--timeslot-seconds", c.timeslot_seconds, "Timeslot length used for joule figures")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--joules", c.joules, "Also print energy in joules");
}

int cmd_gen(const GenArgs& a) {
  WorkloadConfig c;
  c.k = a.k;
  c.server_capacity = a.server_capacity;
  c.utilization = a.utilization;
  c.horizon = a.horizon;
  const Workload w = make_workload(c, a.seed);
  write_text(a.out, io::to_json(w).dump(1) + "\n");
  std::cerr << "generated " << w.jobs.size() << " jobs (k=" << a.k << ", utilization " << a.utilization
            << ", seed " << a.seed << ")\n";
  return 0;
}

int cmd_run(const RunArgs& a, const Common& c) {
  Scenario sc;
  sc.workload = io::load_workload(a.workload);
  sc.k = a.k > 0 ? a.k : sc.workload.config.k;
  sc.server_capacity = sc.workload.config.server_capacity;
  sc.assign = parse_assign_strategy(a.assign);
  sc.route = parse_route_strategy(a.route);
  sc.seed = a.seed;
  sc.rule = parse_membership_rule(a.rule);
  sc.keep_assignment = !a.assignment_csv.empty();
  sc.keep_plans = !a.routing_csv.empty();
  const EnergyReport rep = run_scenario(sc);

  auto lean = rep;
  lean.plans.clear();
  write_text(a.out, io::to_json(lean).dump(1) + "\n");
  if (!a.assignment_csv.empty()) {
    std::ostringstream ss;
    io::write_assignment_csv(ss, sc.workload.jobs, *rep.assignment, FatTree(sc.k, sc.server_capacity));
    io::write_file(a.assignment_csv, ss.str());
  }
  if (!a.routing_csv.empty()) {
    std::ostringstream ss;
    io::write_routing_csv(ss, rep.plans);
    io::write_file(a.routing_csv, ss.str());
  }
  std::cerr << rep.scenario << " " << energy_line("total", rep.total, c.timeslot_seconds, c.joules);
  if (rep.violated()) std::cerr << rep.violations.size() << " capacity violations recorded\n";
  return 0;
}

int cmd_compare(const CompareArgs& a, const Common& c) {
  std::vector<EnergyReport> reports;
  for (const auto& path : a.reports) reports.push_back(io::load_report(path));
  std::string baseline = kBaselineScenario;
  if (!a.baseline.empty()) {
    EnergyReport base = io::load_report(a.baseline);
    baseline = base.scenario;
    const bool listed = std::any_of(reports.begin(), reports.end(),
                                    [&](const EnergyReport& r) { return same_results(r, base); });
    if (!listed) reports.insert(reports.begin(), std::move(base));
  }
  const auto rows = compare(reports, baseline);
  std::ostringstream ss;
  io::write_comparison_csv(ss, rows);
  write_text(a.out, ss.str());
  if (!a.flat.empty()) {
    std::ostringstream fs;
    io::write_flat_csv(fs, io::flat_rows(reports, baseline));
    io::write_file(a.flat, fs.str());
  }
  for (const auto& r : rows)
    std::cerr << energy_line(r.scenario + " mean", r.mean_total, c.timeslot_seconds, c.joules);
  return 0;
}

int cmd_sweep(const SweepArgs& a, const Common& c) {
  SweepConfig cfg;
  cfg.workload.k = a.k;
  cfg.workload.server_capacity = a.server_capacity;
  cfg.workload.horizon = a.horizon;
  cfg.utilizations = a.utilizations;
  cfg.repeats = a.repeats;
  cfg.base_seed = a.base_seed;
  cfg.rule = parse_membership_rule(a.rule);
  cfg.threads = a.threads > 0 ? a.threads : std::max(1u, std::thread::hardware_concurrency());
  const auto rows = sweep(cfg);

  std::filesystem::create_directories(a.out);
  std::ostringstream flat;
  io::write_flat_csv(flat, rows);
  io::write_file((std::filesystem::path(a.out) / "sweep.csv").string(), flat.str());

  // Mean ratio per (utilization, scenario), in grid order.
  std::ostringstream summary;
  summary << "utilization,scenario,runs,mean_total_energy_wt,mean_ratio\n";
  for (double u : cfg.utilizations)
    for (const auto& p : strategy_pairs()) {
      const std::string name = scenario_name(p.assign, p.route);
      double total = 0.0, ratio = 0.0;
      std::size_t n = 0;
      for (const auto& r : rows)
        if (r.utilization == u && r.scenario == name) {
          total += r.total_energy_wt;
          ratio += r.ratio_to_baseline;
          ++n;
        }
      if (n == 0) continue;
      summary << io::format_double(u) << ',' << name << ',' << n << ','
              << io::format_double(total / static_cast<double>(n)) << ','
              << io::format_double(ratio / static_cast<double>(n)) << "\n";
    }
  io::write_file((std::filesystem::path(a.out) / "summary.csv").string(), summary.str());
  std::cerr << rows.size() << " rows written to " << a.out << "\n";
  if (c.joules) {
    double total = 0.0;
    for (const auto& r : rows) total += r.total_energy_wt;
    std::cerr << energy_line("grid total", total, c.timeslot_seconds, true);
  }
  return 0;
}

int cmd_topology(int k, int server_capacity) {
  std::cout << io::topology_summary(FatTree(k, server_capacity)).dump(1) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-aware VM assignment and routing on fat-tree data centers"};
  app.require_subcommand(1);

  GenArgs gen;
  Common gen_c;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a workload file");
  gen_cmd->add_option("--k", gen.k, "Fat-tree arity (even)");
  gen_cmd->add_option("--server-capacity", gen.server_capacity, "VM slots per server");
  gen_cmd->add_option("--utilization", gen.utilization, "Fraction of slots requested");
  gen_cmd->add_option("--horizon", gen.horizon, "Number of timeslots");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--out", gen.out, "Output file, '-' for stdout");
  add_common(gen_cmd, gen_c);

  RunArgs run;
  Common run_c;
  auto* run_cmd = app.add_subcommand("run", "Run one assignment and routing strategy on a workload");
  run_cmd->add_option("--workload", run.workload, "Workload file");
  run_cmd->add_option("--assign", run.assign, "greedy | opt_greedy | eea | opt_eea");
  run_cmd->add_option("--route", run.route, "sp | ecmp | eer");
  run_cmd->add_option("--k", run.k, "Fat-tree arity (defaults to the workload's)");
  run_cmd->add_option("--seed", run.seed, "Seed for stochastic strategies");
  run_cmd->add_option("--rule", run.rule, "most_dissimilar | most_similar");
  run_cmd->add_option("--out", run.out, "Report file, '-' for stdout");
  run_cmd->add_option("--assignment-csv", run.assignment_csv, "Write VM placements");
  run_cmd->add_option("--routing-csv", run.routing_csv, "Write per-timeslot routes");
  add_common(run_cmd, run_c);

  CompareArgs cmp;
  Common cmp_c;
  auto* cmp_cmd = app.add_subcommand("compare", "Normalize reports against a baseline");
  cmp_cmd->add_option("--reports", cmp.reports, "Report files");
  cmp_cmd->add_option("--baseline", cmp.baseline, "Baseline report (default: the Greedy-SP report)");
  cmp_cmd->add_option("--out", cmp.out, "Comparison CSV, '-' for stdout");
  cmp_cmd->add_option("--flat", cmp.flat, "Also write the flat per-report table");
  add_common(cmp_cmd, cmp_c);

  SweepArgs sw;
  Common sw_c;
  auto* sw_cmd = app.add_subcommand("sweep", "Run the strategy grid over utilizations and seeds");
  sw_cmd->add_option("--k", sw.k, "Fat-tree arity (even)");
  sw_cmd->add_option("--server-capacity", sw.server_capacity, "VM slots per server");
  sw_cmd->add_option("--horizon", sw.horizon, "Number of timeslots");
  sw_cmd->add_option("--utilizations", sw.utilizations, "Comma-separated list")->delimiter(',');
  sw_cmd->add_option("--repeats", sw.repeats, "Seeds per utilization");
  sw_cmd->add_option("--base-seed", sw.base_seed, "Seed of the first repeat");
  sw_cmd->add_option("--rule", sw.rule, "most_dissimilar | most_similar");
  sw_cmd->add_option("--threads", sw.threads, "Worker threads, 0 for all cores");
  sw_cmd->add_option("--out", sw.out, "Output directory");
  add_common(sw_cmd, sw_c);

  int topo_k = 8, topo_cap = 2;
  Common topo_c;
  auto* topo_cmd = app.add_subcommand("topology", "Print switch and server counts");
  topo_cmd->add_option("--k", topo_k, "Fat-tree arity (even)");
  topo_cmd->add_option("--server-capacity", topo_cap, "VM slots per server");
  add_common(topo_cmd, topo_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    auto with_config = [](CLI::App* sub, const Common& c) {
      if (!c.config.empty()) apply_config_file(*sub, c.config);
    };
    if (*gen_cmd) {
      with_config(gen_cmd, gen_c);
      return cmd_gen(gen);
    }
    if (*run_cmd) {
      with_config(run_cmd, run_c);
      if (run.workload.empty()) throw ConfigError("run: --workload is required");
      return cmd_run(run, run_c);
    }
    if (*cmp_cmd) {
      with_config(cmp_cmd, cmp_c);
      if (cmp.reports.empty() && cmp.baseline.empty()) throw ConfigError("compare: --reports is required");
      return cmd_compare(cmp, cmp_c);
    }
    if (*sw_cmd) {
      with_config(sw_cmd, sw_c);
      return cmd_sweep(sw, sw_c);
    }
    if (*topo_cmd) {
      with_config(topo_cmd, topo_c);
      return cmd_topology(topo_k, topo_cap);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
