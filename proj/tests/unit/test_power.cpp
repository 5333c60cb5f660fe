#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "greendcn/power.hpp"

using namespace greendcn;
using Catch::Approx;

TEST_CASE("switch power anchors") {
  const auto p = PowerParams::commodity();
  CHECK(switch_power(0.0, p) == 0.0);
  CHECK(switch_power(1000.0, p) == Approx(300.0).epsilon(1e-12));
  CHECK(switch_power(500.0, p) == Approx(225.0).epsilon(1e-12));
}

TEST_CASE("switch power rejects loads outside [0, C]") {
  const auto p = PowerParams::commodity();
  CHECK_THROWS_AS(switch_power(-1.0, p), DomainError);
  CHECK_THROWS_AS(switch_power(1000.1, p), DomainError);
  CHECK_NOTHROW(switch_power(1000.0 * (1.0 + 1e-12), p));
}

TEST_CASE("power jumps by sigma at zero") {
  const auto p = PowerParams::commodity();
  CHECK(switch_power(1e-12, p) - switch_power(0.0, p) == Approx(p.sigma()).epsilon(1e-9));
}

TEST_CASE("power params validation and regime flag") {
  CHECK_THROWS_AS(PowerParams(-1, 1e-4, 2, 1000), ConfigError);
  CHECK_THROWS_AS(PowerParams(200, 0, 2, 1000), ConfigError);
  CHECK_THROWS_AS(PowerParams(200, 1e-4, 1.0, 1000), ConfigError);
  CHECK_THROWS_AS(PowerParams(200, 1e-4, 2, 0), ConfigError);
  CHECK(PowerParams::commodity().high_startup());
  CHECK_FALSE(PowerParams(1, 1, 2, 10).high_startup());
}

TEST_CASE("power rate") {
  const auto p = PowerParams::commodity();
  CHECK(power_rate(1000.0, p) == Approx(0.3).epsilon(1e-12));
  CHECK(power_rate(500.0, p) == Approx(0.45).epsilon(1e-12));
  CHECK_THROWS_AS(power_rate(0.0, p), DomainError);
  CHECK_THROWS_AS(power_rate(-3.0, p), DomainError);
}

TEST_CASE("optimal rate") {
  const auto r = optimal_rate(PowerParams::commodity());
  CHECK(r.load_gbps == Approx(1414.2135623730951).epsilon(1e-12));
  CHECK(r.exceeds_capacity);
  CHECK(optimal_rate(PowerParams(1, 1, 2, 10)).load_gbps == Approx(1.0));
  CHECK(optimal_rate(PowerParams(1e-12, 1, 2, 10)).load_gbps < 1e-5);
}

TEST_CASE("optimal rate minimises the power rate") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double alpha = 1.1 + 1.9 * u(rng);
    const double mu = 1e-3 + u(rng);
    const double sigma = 0.1 + 50.0 * u(rng);
    const double rstar = std::pow(sigma / (mu * (alpha - 1.0)), 1.0 / alpha);
    const PowerParams p(sigma, mu, alpha, rstar * (1.0 + 2.0 * u(rng)));
    const auto opt = optimal_rate(p);
    REQUIRE_FALSE(opt.exceeds_capacity);
    const double best = power_rate(opt.load_gbps, p);
    for (int s = 0; s < 20; ++s) {
      const double x = p.capacity() * (1e-6 + u(rng));
      if (x > p.capacity()) continue;
      CHECK(best <= power_rate(x, p) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("power curve is convex on (0, C]") {
  const auto p = PowerParams::commodity();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    double a = 1e-6 + 999.0 * u(rng), b = 1e-6 + 999.0 * u(rng);
    if (a > b) std::swap(a, b);
    const double l = u(rng);
    CHECK(switch_power(l * a + (1 - l) * b, p) <=
          l * switch_power(a, p) + (1 - l) * switch_power(b, p) + 1e-9);
  }
}

TEST_CASE("even split minimises total power for a fixed switch count") {
  const auto p = PowerParams::commodity();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const int n = 2 + static_cast<int>(u(rng) * 6);
    const double total = n * 1000.0 * u(rng);
    const double even = balanced_power(total, static_cast<std::size_t>(n), p);
    // Random feasible split with every share positive.
    std::vector<double> w(static_cast<std::size_t>(n));
    double ws = 0.0;
    for (double& x : w) ws += (x = 0.05 + u(rng));
    double sum = 0.0;
    bool feasible = true;
    for (double x : w) {
      const double share = total * x / ws;
      if (share > 1000.0) feasible = false;
      else sum += switch_power(share, p);
    }
    if (feasible) CHECK(even <= sum + 1e-9);
  }
}

TEST_CASE("network energy accounting") {
  const auto p = PowerParams::commodity();
  std::vector<LoadMap> idle{LoadMap(0, 2)};
  CHECK(network_energy(idle, p).total == 0.0);

  std::vector<LoadMap> full{LoadMap(0, 1)};
  full[0].loads[0] = 1000.0;
  CHECK(network_energy(full, p).total == Approx(300.0));

  std::vector<LoadMap> two{LoadMap(0, 1), LoadMap(1, 1)};
  two[0].loads[0] = two[1].loads[0] = 500.0;
  const auto e = network_energy(two, p);
  CHECK(e.total == Approx(450.0));
  REQUIRE(e.per_timeslot.size() == 2);
  CHECK(e.per_timeslot[0] == Approx(225.0));
}

TEST_CASE("network energy names the overloaded switch") {
  const auto p = PowerParams::commodity();
  std::vector<LoadMap> maps{LoadMap(0, 3), LoadMap(7, 3)};
  maps[1].loads[2] = 1200.0;
  try {
    network_energy(maps, p);
    FAIL("expected a capacity violation");
  } catch (const CapacityViolation& v) {
    REQUIRE(v.entries().size() == 1);
    CHECK(v.entries()[0].timeslot == 7);
    CHECK(v.entries()[0].switch_id == 2);
  }
}

TEST_CASE("uncapped power matches the curve inside capacity") {
  const auto p = PowerParams::commodity();
  CHECK(switch_power_uncapped(0.0, p) == 0.0);
  CHECK(switch_power_uncapped(500.0, p) == switch_power(500.0, p));
  CHECK(switch_power_uncapped(2000.0, p) == Approx(600.0));
}

TEST_CASE("fewer balanced switches never cost more under high startup") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double alpha = 1.0 + 2.0 * u(rng) + 1e-6;
    const double cap = 100.0 + 900.0 * u(rng);
    const double mu = 1e-5 + 1e-3 * u(rng);
    const double sigma = mu * (alpha - 1.0) * std::pow(cap, alpha) * (1.0 + u(rng));
    const PowerParams p(sigma, mu, alpha, cap);
    const double load = 20.0 * cap * u(rng);
    const auto n0 = static_cast<std::size_t>(std::max(1.0, std::ceil(load / cap)));
    for (std::size_t n = n0; n < n0 + 5; ++n)
      CHECK(balanced_power(load, n, p) <= balanced_power(load, n + 1, p) * (1.0 + 1e-12));
  }
}

TEST_CASE("consolidation gain closed form") {
  const auto p = PowerParams::commodity();
  // Two ToRs carrying 100 each versus one carrying 200 (w2 = w3 = 0).
  CHECK(tor_consolidation_gain(100, 0, 0, 100, p) ==
        Approx(2 * 200 + 2 * 1e-4 * 100 * 100 - (200 + 1e-4 * 200 * 200)));
}
