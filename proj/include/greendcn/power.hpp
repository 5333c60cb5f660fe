#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "greendcn/error.hpp"

namespace greendcn {

/// Relative slack applied to every capacity comparison. Fluid splitting can
/// land exactly on C after floating-point accumulation.
inline constexpr double kCapacityTolerance = 1e-9;

inline bool within_capacity(double load, double capacity) {
  return load <= capacity * (1.0 + kCapacityTolerance);
}

/// Switch power curve f(x) = 0 for x = 0, sigma + mu * x^alpha otherwise.
/// Loads are in Gbps, power in watts.
class PowerParams {
 public:
  PowerParams(double sigma, double mu, double alpha, double capacity)
      : sigma_(sigma), mu_(mu), alpha_(alpha), capacity_(capacity) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
      throw ConfigError("power: sigma must be finite and >= 0, got " + std::to_string(sigma));
    if (!(mu > 0.0) || !std::isfinite(mu))
      throw ConfigError("power: mu must be finite and > 0, got " + std::to_string(mu));
    if (!(alpha > 1.0) || !std::isfinite(alpha))
      throw ConfigError("power: alpha must be finite and > 1, got " + std::to_string(alpha));
    if (!(capacity > 0.0) || !std::isfinite(capacity))
      throw ConfigError("power: capacity must be finite and > 0, got " + std::to_string(capacity));
    high_startup_ = sigma_ > mu_ * (alpha_ - 1.0) * std::pow(capacity_, alpha_);
  }

  /// 1 Tbps commodity switch drawing 200 W idle and 300 W at full load.
  static PowerParams commodity() { return PowerParams(200.0, 1e-4, 2.0, 1000.0); }

  double sigma() const { return sigma_; }
  double mu() const { return mu_; }
  double alpha() const { return alpha_; }
  double capacity() const { return capacity_; }

  /// sigma > mu (alpha - 1) C^alpha, i.e. the rate-optimal load lies above C.
  bool high_startup() const { return high_startup_; }

  friend bool operator==(const PowerParams&, const PowerParams&) = default;

 private:
  double sigma_;
  double mu_;
  double alpha_;
  double capacity_;
  bool high_startup_ = false;
};

inline double switch_power(double load, const PowerParams& params) {
  if (!(load >= 0.0))
    throw DomainError("switch_power: negative load " + std::to_string(load));
  if (!within_capacity(load, params.capacity()))
    throw DomainError("switch_power: load " + std::to_string(load) +
                      " Gbps exceeds capacity " + std::to_string(params.capacity()));
  if (load == 0.0) return 0.0;
  return params.sigma() + params.mu() * std::pow(load, params.alpha());
}

/// Same curve without the capacity check, for accounting runs that record
/// overloads instead of rejecting them.
inline double switch_power_uncapped(double load, const PowerParams& params) {
  if (!(load > 0.0)) return 0.0;
  return params.sigma() + params.mu() * std::pow(load, params.alpha());
}

/// Watts per Gbps at the given load.
inline double power_rate(double load, const PowerParams& params) {
  if (!(load > 0.0))
    throw DomainError("power_rate: undefined for load " + std::to_string(load));
  return switch_power(load, params) / load;
}

struct OptimalRate {
  double load_gbps;        ///< R* = (sigma / (mu (alpha - 1)))^(1/alpha)
  bool exceeds_capacity;   ///< R* > C
};

inline OptimalRate optimal_rate(const PowerParams& params) {
  const double r = std::pow(params.sigma() / (params.mu() * (params.alpha() - 1.0)),
                            1.0 / params.alpha());
  return {r, r > params.capacity()};
}

/// Per-switch loads (Gbps) of one timeslot, indexed by switch id. A zero
/// entry is an idle or sleeping switch.
struct LoadMap {
  std::size_t timeslot = 0;
  std::vector<double> loads;

  LoadMap() = default;
  LoadMap(std::size_t t, std::size_t switch_count) : timeslot(t), loads(switch_count, 0.0) {}

  friend bool operator==(const LoadMap&, const LoadMap&) = default;
};

struct EnergyTotals {
  double total = 0.0;               ///< watt-timeslots
  std::vector<double> per_timeslot; ///< watts, one entry per LoadMap
};

/// Sum of switch power over every switch and timeslot. The unit is
/// watt-timeslots; multiply by the timeslot length for joules.
inline EnergyTotals network_energy(std::span<const LoadMap> maps, const PowerParams& params) {
  EnergyTotals out;
  out.per_timeslot.reserve(maps.size());
  for (const LoadMap& m : maps) {
    double watts = 0.0;
    for (std::size_t v = 0; v < m.loads.size(); ++v) {
      const double x = m.loads[v];
      if (!(x >= 0.0) || !within_capacity(x, params.capacity())) {
        throw CapacityViolation("network_energy: timeslot " + std::to_string(m.timeslot) +
                                    " switch " + std::to_string(v) + " load " +
                                    std::to_string(x) + " Gbps outside [0, C]",
                                {{m.timeslot, v, x}});
      }
      watts += switch_power(x, params);
    }
    out.per_timeslot.push_back(watts);
    out.total += watts;
  }
  return out;
}

// Closed forms used by the assignment-principle property checks.

/// Power of n switches sharing a total load evenly: n sigma + n mu (L/n)^alpha.
inline double balanced_power(double total_load, std::size_t switches, const PowerParams& params) {
  if (switches == 0) {
    if (total_load > 0.0) throw DomainError("balanced_power: load on zero switches");
    return 0.0;
  }
  const double n = static_cast<double>(switches);
  const double per = total_load / n;
  if (per == 0.0) return 0.0;
  return n * params.sigma() + n * params.mu() * std::pow(per, params.alpha());
}

/// Two ToRs carrying traffic between VM sets A and B (w1 = A->A, w2 = A->B,
/// w3 = B->A, w4 = B->B) versus one ToR hosting both sets. Returns
/// P_two - P_one; non-negative when consolidation pays off.
inline double tor_consolidation_gain(double w1, double w2, double w3, double w4,
                                     const PowerParams& p) {
  const double a = p.alpha();
  const double two = 2.0 * p.sigma() + p.mu() * std::pow(w1 + w2 + w3, a) +
                     p.mu() * std::pow(w2 + w3 + w4, a);
  const double one = p.sigma() + p.mu() * std::pow(w1 + w2 + w3 + w4, a);
  return two - one;
}

/// One pod: a job compacted into a single rack versus spread evenly over
/// `racks` racks with intra-rack traffic u per rack and inter-rack traffic w
/// per rack pair, using racks/2 aggregation switches. Startup cost is left
/// out since no switch can sleep in either layout. Returns P_compact - P_spread.
inline double rack_spread_gain(double u, double w, std::size_t racks, const PowerParams& p) {
  const double k = static_cast<double>(racks);
  const double a = p.alpha();
  const double compact = p.mu() * std::pow(k * u + k * (k - 1.0) / 2.0 * w, a);
  const double spread = k * p.mu() * std::pow(u + (k - 1.0) * w, a) +
                        (k / 2.0) * p.mu() * std::pow((k - 1.0) * w, a);
  return compact - spread;
}

}  // namespace greendcn
