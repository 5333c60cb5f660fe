#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "greendcn/error.hpp"

namespace greendcn {

/// Dense row-major n x n matrix of VM-to-VM rates in Mbps. Entry (a, b) is
/// the flow from VM a to VM b.
class TrafficMatrix {
 public:
  TrafficMatrix() = default;
  explicit TrafficMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
  TrafficMatrix(std::size_t n, std::vector<double> row_major) : n_(n), data_(std::move(row_major)) {
    if (data_.size() != n * n)
      throw ConfigError("traffic matrix: expected " + std::to_string(n * n) + " entries, got " +
                        std::to_string(data_.size()));
  }

  std::size_t size() const { return n_; }
  double& operator()(std::size_t a, std::size_t b) { return data_[a * n_ + b]; }
  double operator()(std::size_t a, std::size_t b) const { return data_[a * n_ + b]; }
  std::span<const double> data() const { return data_; }

  double sum() const { return std::accumulate(data_.begin(), data_.end(), 0.0); }

  TrafficMatrix& operator+=(const TrafficMatrix& o) {
    if (o.n_ != n_) throw DomainError("traffic matrix: size mismatch in +=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }

  TrafficMatrix& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }

  friend bool operator==(const TrafficMatrix&, const TrafficMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// A communication-intensive interval [start, end] (inclusive timeslots) with
/// a constant traffic matrix.
struct Transfer {
  std::uint32_t start = 0;
  std::uint32_t end = 0;
  TrafficMatrix matrix;

  bool active_at(std::size_t t) const { return start <= t && t <= end; }
  std::size_t length() const { return static_cast<std::size_t>(end) - start + 1; }

  friend bool operator==(const Transfer&, const Transfer&) = default;
};

struct Job {
  std::uint32_t id = 0;
  std::uint32_t vm_count = 0;
  std::uint32_t vm_resource = 1;  ///< server slots taken by each VM
  std::vector<Transfer> transfers;

  long slot_demand() const { return static_cast<long>(vm_count) * vm_resource; }

  friend bool operator==(const Job&, const Job&) = default;
};

/// Throws ConfigError when the job breaks a structural invariant. Timeslots
/// run from 0 to horizon - 1.
inline void validate_job(const Job& job, std::size_t horizon) {
  const std::string who = "job " + std::to_string(job.id);
  if (job.vm_count < 1) throw ConfigError(who + ": vm_count must be >= 1");
  if (job.vm_resource < 1) throw ConfigError(who + ": vm_resource must be >= 1");
  for (const Transfer& tr : job.transfers) {
    if (tr.start > tr.end) throw ConfigError(who + ": transfer start after end");
    if (tr.end >= horizon)
      throw ConfigError(who + ": transfer ends at " + std::to_string(tr.end) +
                        " beyond horizon " + std::to_string(horizon));
    if (tr.matrix.size() != job.vm_count)
      throw ConfigError(who + ": transfer matrix is not vm_count x vm_count");
    for (std::size_t a = 0; a < job.vm_count; ++a) {
      if (tr.matrix(a, a) != 0.0) throw ConfigError(who + ": non-zero matrix diagonal");
      for (std::size_t b = 0; b < job.vm_count; ++b)
        if (!(tr.matrix(a, b) >= 0.0)) throw ConfigError(who + ": negative or NaN rate");
    }
  }
}

}  // namespace greendcn
