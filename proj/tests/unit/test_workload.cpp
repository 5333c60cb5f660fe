#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "greendcn/workload.hpp"

using namespace greendcn;
using Catch::Approx;

namespace {

Job two_vm_job(double ab, double ba, std::uint32_t start, std::uint32_t end) {
  Job j;
  j.vm_count = 2;
  Transfer tr{start, end, TrafficMatrix(2)};
  tr.matrix(0, 1) = ab;
  tr.matrix(1, 0) = ba;
  j.transfers.push_back(tr);
  return j;
}

long requested(const std::vector<Job>& jobs) {
  long s = 0;
  for (const Job& j : jobs) s += j.slot_demand();
  return s;
}

}  // namespace

TEST_CASE("zero utilization gives no jobs") {
  WorkloadConfig c;
  c.k = 4;
  c.utilization = 0.0;
  CHECK(generate_workload(c, 1).empty());
}

TEST_CASE("utilization outside [0, 1] is rejected") {
  WorkloadConfig c;
  c.utilization = 1.2;
  CHECK_THROWS_AS(generate_workload(c, 1), ConfigError);
  c.utilization = -0.1;
  CHECK_THROWS_AS(generate_workload(c, 1), ConfigError);
}

TEST_CASE("stopping rule on k=4 at half load") {
  WorkloadConfig c;
  c.k = 4;
  c.utilization = 0.5;
  const auto jobs = generate_workload(c, 7);
  long biggest = 0;
  for (const Job& j : jobs) biggest = std::max(biggest, j.slot_demand());
  const long total = requested(jobs);
  CHECK(total >= 16);
  CHECK(total < 16 + biggest);
  // Requested slots cross the target only with the last job.
  CHECK(total - jobs.back().slot_demand() < 16);
}

TEST_CASE("generated jobs respect their invariants") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    WorkloadConfig c;
    c.k = 8;
    c.utilization = 0.05 + 0.03 * static_cast<double>(seed);
    const auto jobs = generate_workload(c, seed);
    const FatTree t(c.k);
    CHECK(requested(jobs) <= t.total_slots());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const Job& j = jobs[i];
      CHECK(j.id == i);
      CHECK(j.vm_count >= 2);
      CHECK(j.slot_demand() <= t.pod_slot_capacity());
      REQUIRE(j.transfers.size() == 1);
      const Transfer& tr = j.transfers[0];
      CHECK(tr.end < c.horizon);
      CHECK(tr.length() <= 60);
      // Only windows cut at the horizon may be shorter than 30 slots.
      if (tr.end != c.horizon - 1) CHECK(tr.length() >= 30);
      CHECK_NOTHROW(validate_job(j, c.horizon));
    }
  }
}

TEST_CASE("generation is reproducible") {
  WorkloadConfig c;
  c.utilization = 0.4;
  CHECK(generate_workload(c, 99) == generate_workload(c, 99));
  CHECK_FALSE(generate_workload(c, 99) == generate_workload(c, 100));
}

TEST_CASE("rate sample mean and variance") {
  WorkloadConfig c;
  c.k = 16;
  c.utilization = 0.9;
  const auto jobs = generate_workload(c, 2024);
  double sum = 0.0, sq = 0.0;
  std::size_t n = 0;
  for (const Job& j : jobs)
    for (std::size_t a = 0; a < j.vm_count; ++a)
      for (std::size_t b = 0; b < j.vm_count; ++b)
        if (a != b) {
          const double x = j.transfers[0].matrix(a, b);
          sum += x;
          sq += x * x;
          ++n;
        }
  REQUIRE(n >= 5000);
  const double mean = sum / static_cast<double>(n);
  CHECK(mean >= 49.0);
  CHECK(mean <= 51.0);
  const double var = sq / static_cast<double>(n) - mean * mean;
  CHECK(var == Approx(1.0).margin(0.1));
}

TEST_CASE("VM count distribution is centred on servers per rack") {
  WorkloadConfig c;
  c.k = 16;  // K = 8, capped at 128
  c.utilization = 1.0;
  double sum = 0.0;
  std::size_t n = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto jobs = generate_workload(c, seed);
    jobs.pop_back();  // the last job may be cut to the remaining slots
    for (const Job& j : jobs) {
      sum += j.vm_count;
      ++n;
    }
  }
  // Re-drawing values below 2 lifts the mean of N(8, 4) slightly.
  CHECK(sum / static_cast<double>(n) == Approx(8.3).margin(0.4));
}

TEST_CASE("referential matrix") {
  Job empty;
  empty.vm_count = 3;
  CHECK(referential_matrix(empty).sum() == 0.0);

  const Job j = two_vm_job(3, 4, 10, 14);
  const auto ref = referential_matrix(j);
  CHECK(ref(0, 1) == 15.0);
  CHECK(ref(1, 0) == 20.0);
}

TEST_CASE("referential matrix equals the per-timeslot sum") {
  Job j;
  j.vm_count = 3;
  Transfer a{2, 9, TrafficMatrix(3)};
  Transfer b{5, 20, TrafficMatrix(3)};
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t y = 0; y < 3; ++y)
      if (x != y) {
        a.matrix(x, y) = 1.0 + static_cast<double>(x + 2 * y);
        b.matrix(x, y) = 0.5 * static_cast<double>(3 * x + y);
      }
  j.transfers = {a, b};
  TrafficMatrix brute(3);
  for (std::size_t t = 0; t < 30; ++t) brute += traffic_at(j, t);
  const auto ref = referential_matrix(j);
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t y = 0; y < 3; ++y) CHECK(ref(x, y) == Approx(brute(x, y)));
}

TEST_CASE("pattern vector") {
  Job none;
  none.vm_count = 2;
  const auto eps = pattern_vector(none, 6, 0.25);
  for (double v : eps) CHECK(v == 0.25);

  const Job j = two_vm_job(60, 40, 3, 4);
  const auto v = pattern_vector(j, 8);
  CHECK(v[3] == 50.0);
  CHECK(v[4] == 50.0);
  CHECK(v[2] == 0.0);
  CHECK(v[5] == 0.0);

  const auto doubled = pattern_vector(two_vm_job(120, 80, 3, 4), 8);
  CHECK(doubled[3] == 100.0);
}

TEST_CASE("job distance") {
  const std::vector<double> a{3, 0}, b{0, 4}, u{1, 0}, z{0, 0};
  CHECK(job_distance(a, a) == kDistMax);
  CHECK(job_distance(u, z) == 1.0);
  CHECK(job_distance(a, b) == Approx(0.2));
  const std::vector<double> c{1, 2, 3};
  CHECK_THROWS_AS(job_distance(a, c), DomainError);
}

TEST_CASE("demands at a timeslot") {
  const FatTree t(4);
  std::vector<Job> jobs{two_vm_job(30, 20, 2, 5)};
  Assignment a(jobs);
  a.place(0, 0, 0);
  a.place(0, 1, 5);
  CHECK(demands_at(jobs, a, 1).demands.empty());
  const auto ds = demands_at(jobs, a, 3);
  REQUIRE(ds.demands.size() == 2);
  CHECK(ds.demands[0] == Demand{0, 5, 30.0});
  CHECK(ds.demands[1] == Demand{5, 0, 20.0});

  Assignment same(jobs);
  same.place(0, 0, 7);
  same.place(0, 1, 7);
  CHECK(demands_at(jobs, same, 3).demands.empty());

  Assignment partial(jobs);
  partial.place(0, 0, 1);
  CHECK_THROWS_AS(demands_at(jobs, partial, 3), ConfigError);
}

TEST_CASE("demand aggregation preserves total rate") {
  WorkloadConfig c;
  c.k = 4;
  c.utilization = 0.9;
  const auto jobs = generate_workload(c, 5);
  const FatTree t(4);
  // Pack VMs round-robin so some pairs share a server and others do not.
  Assignment a(jobs);
  SlotLedger ledger(t);
  ServerId next = 0;
  for (std::size_t j = 0; j < jobs.size(); ++j)
    for (std::size_t m = 0; m < jobs[j].vm_count; ++m) {
      while (!ledger.fits(next, 1)) next = (next + 1) % t.server_count();
      ledger.take(next, 1);
      a.place(j, m, next);
      next = (next + 3) % t.server_count();
    }
  for (std::size_t ts = 0; ts < c.horizon; ts += 7) {
    double want = 0.0;
    std::map<std::pair<ServerId, ServerId>, double> pairs;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      const auto m = traffic_at(jobs[j], ts);
      for (std::size_t x = 0; x < m.size(); ++x)
        for (std::size_t y = 0; y < m.size(); ++y)
          if (a.host(j, x) != a.host(j, y) && m(x, y) > 0) {
            want += m(x, y);
            pairs[{a.host(j, x), a.host(j, y)}] += m(x, y);
          }
    }
    const auto ds = demands_at(jobs, a, ts);
    double got = 0.0;
    for (const Demand& d : ds.demands) {
      CHECK(d.src != d.dst);
      CHECK(d.rate_mbps > 0.0);
      got += d.rate_mbps;
    }
    CHECK(got == Approx(want));
    CHECK(ds.demands.size() == pairs.size());
  }
}

TEST_CASE("job validation") {
  Job j = two_vm_job(1, 1, 0, 3);
  CHECK_NOTHROW(validate_job(j, 4));
  CHECK_THROWS_AS(validate_job(j, 3), ConfigError);
  j.transfers[0].matrix(0, 0) = 1.0;
  CHECK_THROWS_AS(validate_job(j, 4), ConfigError);
  Job bad = two_vm_job(-1, 1, 0, 1);
  CHECK_THROWS_AS(validate_job(bad, 4), ConfigError);
}
