#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>
#include <string>

#include "greendcn/config.hpp"
#include "greendcn/io.hpp"

using namespace greendcn;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "greendcn_test_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("workload round trip") {
  WorkloadConfig c;
  c.k = 4;
  c.utilization = 0.7;
  const Workload w = make_workload(c, 42);
  REQUIRE_FALSE(w.jobs.empty());
  CHECK(io::workload_from_json(io::to_json(w)) == w);

  const auto path = scratch("w.json").string();
  io::save_workload(w, path);
  CHECK(io::load_workload(path) == w);
}

TEST_CASE("workload files are checked") {
  CHECK_THROWS_AS(io::workload_from_json(io::json{{"format", "other"}}), ConfigError);
  CHECK_THROWS_AS(io::parse_json("{not json", "test"), ConfigError);
  CHECK_THROWS_AS(io::read_file(scratch("missing.json").string()), ConfigError);
  auto j = io::to_json(make_workload(WorkloadConfig{}, 1));
  j["version"] = 99;
  CHECK_THROWS_AS(io::workload_from_json(j), ConfigError);
}

TEST_CASE("report round trip") {
  Scenario sc;
  sc.k = 4;
  WorkloadConfig c;
  c.k = 4;
  c.utilization = 0.5;
  sc.workload = make_workload(c, 3);
  sc.assign = AssignStrategy::kOptEea;
  sc.route = RouteStrategy::kEer;
  sc.seed = 3;
  const EnergyReport r = run_scenario(sc);
  const EnergyReport back = io::report_from_json(io::to_json(r));
  CHECK(same_results(r, back));
  CHECK(back.runtime_ms == r.runtime_ms);

  const auto path = scratch("r.json").string();
  io::save_report(r, path);
  CHECK(same_results(io::load_report(path), r));
}

TEST_CASE("flat table layout") {
  std::ostringstream out;
  io::write_flat_csv(out, {{"Greedy-SP", 0.25, 7, 1234.5, 1.0, 3.25, 0}});
  std::istringstream in(out.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "scenario,utilization,seed,total_energy_wt,ratio_to_baseline,runtime_ms,violations");
  CHECK(row == "Greedy-SP,0.25,7,1234.5,1,3.25,0");
}

TEST_CASE("assignment and routing exports") {
  const FatTree t(4);
  std::vector<Job> jobs(1);
  jobs[0].vm_count = 2;
  Assignment a(jobs);
  a.place(0, 0, 0);
  a.place(0, 1, 5);
  std::ostringstream as;
  io::write_assignment_csv(as, jobs, a, t);
  CHECK(as.str() == "job,vm,server,pod,rack\n0,0,0,0,0\n0,1,5,1,0\n");

  RoutingPlan p;
  p.timeslot = 2;
  p.demands = {{0, 1, 12.5}};
  p.paths = {Path{t.tor(0, 0)}};
  std::ostringstream rs;
  io::write_routing_csv(rs, std::span<const RoutingPlan>(&p, 1));
  CHECK(rs.str() == "timeslot,src,dst,rate_mbps,path\n2,0,1,12.5,0\n");
}

TEST_CASE("topology summary") {
  const auto s = io::topology_summary(FatTree(16));
  CHECK(s["switches"] == 320);
  CHECK(s["servers"] == 1024);
  CHECK(s["core"] == 64);
}

TEST_CASE("key-value config") {
  const auto kv = config::parse_key_values("# scenario\nk = 8\n\nroute=eer  # trailing\nk=16\n");
  CHECK(kv.size() == 2);
  CHECK(kv.at("k") == "16");
  CHECK(kv.at("route") == "eer");
  CHECK_THROWS_AS(config::parse_key_values("k 8"), ConfigError);
  CHECK_THROWS_AS(config::parse_key_values("= 8"), ConfigError);
  CHECK(config::to_double("u", "0.5") == 0.5);
  CHECK_THROWS_AS(config::to_double("u", "0.5x"), ConfigError);
  CHECK(config::to_integer("k", "8") == 8);
  CHECK_THROWS_AS(config::to_integer("k", "eight"), ConfigError);
  CHECK(config::to_bool("b", "yes"));
  CHECK_THROWS_AS(config::to_bool("b", "maybe"), ConfigError);
}
