#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "greendcn/error.hpp"
#include "greendcn/job.hpp"
#include "greendcn/topology.hpp"

namespace greendcn {

inline constexpr ServerId kUnassigned = std::numeric_limits<ServerId>::max();

/// VM -> server map. Jobs are addressed by their position in the job list,
/// VMs by their index inside the job.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::span<const Job> jobs) {
    hosts_.reserve(jobs.size());
    for (const Job& j : jobs) hosts_.emplace_back(j.vm_count, kUnassigned);
  }

  std::size_t job_count() const { return hosts_.size(); }
  std::size_t vm_count(std::size_t job) const { return hosts_.at(job).size(); }

  void place(std::size_t job, std::size_t vm, ServerId server) { hosts_.at(job).at(vm) = server; }
  ServerId host(std::size_t job, std::size_t vm) const { return hosts_.at(job).at(vm); }
  std::span<const ServerId> hosts(std::size_t job) const { return hosts_.at(job); }

  bool complete() const {
    for (const auto& h : hosts_)
      for (ServerId s : h)
        if (s == kUnassigned) return false;
    return true;
  }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::vector<ServerId>> hosts_;
};

/// Free-slot bookkeeping over all servers of a tree.
class SlotLedger {
 public:
  explicit SlotLedger(const FatTree& tree)
      : capacity_(tree.server_capacity()), used_(tree.server_count(), 0) {}

  int capacity() const { return capacity_; }
  int used(ServerId s) const { return used_.at(s); }
  int free(ServerId s) const { return capacity_ - used_.at(s); }
  bool fits(ServerId s, int slots) const { return free(s) >= slots; }
  std::size_t server_count() const { return used_.size(); }

  void take(ServerId s, int slots) {
    if (!fits(s, slots))
      throw InfeasibleError("server " + std::to_string(s) + " has " + std::to_string(free(s)) +
                            " free slots, " + std::to_string(slots) + " requested");
    used_[s] += slots;
  }

 private:
  int capacity_;
  std::vector<int> used_;
};

/// Placement constraints: every VM placed exactly once on a real server, and no
/// server over its slot capacity. Returns human-readable problems, empty
/// when the assignment is valid.
inline std::vector<std::string> validate_assignment(std::span<const Job> jobs, const Assignment& a,
                                                    const FatTree& tree) {
  std::vector<std::string> problems;
  if (a.job_count() != jobs.size()) {
    problems.push_back("assignment covers " + std::to_string(a.job_count()) + " jobs, expected " +
                       std::to_string(jobs.size()));
    return problems;
  }
  std::vector<long> used(tree.server_count(), 0);
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (a.vm_count(j) != jobs[j].vm_count) {
      problems.push_back("job " + std::to_string(jobs[j].id) + ": VM count mismatch");
      continue;
    }
    for (std::size_t m = 0; m < jobs[j].vm_count; ++m) {
      const ServerId s = a.host(j, m);
      if (s == kUnassigned) {
        problems.push_back("job " + std::to_string(jobs[j].id) + " vm " + std::to_string(m) +
                           ": unassigned");
      } else if (s >= tree.server_count()) {
        problems.push_back("job " + std::to_string(jobs[j].id) + " vm " + std::to_string(m) +
                           ": unknown server " + std::to_string(s));
      } else {
        used[s] += jobs[j].vm_resource;
      }
    }
  }
  for (ServerId s = 0; s < used.size(); ++s)
    if (used[s] > tree.server_capacity())
      problems.push_back("server " + std::to_string(s) + " holds " + std::to_string(used[s]) +
                         " slots, capacity " + std::to_string(tree.server_capacity()));
  return problems;
}

}  // namespace greendcn
