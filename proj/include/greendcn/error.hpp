#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace greendcn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or malformed input documents. CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A value outside the domain of a mathematical function (negative load,
// rate at zero, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// The workload or the traffic cannot be accommodated. CLI exit code 3.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

struct CapacityViolationEntry {
  std::size_t timeslot = 0;
  std::size_t switch_id = 0;
  double load_gbps = 0.0;
};

class CapacityViolation : public InfeasibleError {
 public:
  CapacityViolation(std::string what, std::vector<CapacityViolationEntry> entries)
      : InfeasibleError(std::move(what)), entries_(std::move(entries)) {}

  const std::vector<CapacityViolationEntry>& entries() const { return entries_; }

 private:
  std::vector<CapacityViolationEntry> entries_;
};

// Failure of one stage of a scenario run, with the timeslot when the stage
// is per-timeslot.
class ScenarioError : public InfeasibleError {
 public:
  static constexpr std::size_t kNoTimeslot = static_cast<std::size_t>(-1);

  ScenarioError(std::string stage, std::size_t timeslot, const std::string& cause)
      : InfeasibleError(format(stage, timeslot, cause)),
        stage_(std::move(stage)),
        timeslot_(timeslot) {}

  const std::string& stage() const { return stage_; }
  std::size_t timeslot() const { return timeslot_; }

 private:
  static std::string format(const std::string& stage, std::size_t timeslot,
                            const std::string& cause) {
    std::string msg = "stage '" + stage + "'";
    if (timeslot != kNoTimeslot) msg += " at timeslot " + std::to_string(timeslot);
    return msg + ": " + cause;
  }

  std::string stage_;
  std::size_t timeslot_;
};

}  // namespace greendcn
