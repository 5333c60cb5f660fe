#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "greendcn/error.hpp"

namespace greendcn::graphkit {

/// First-fit decreasing. Items are visited largest first (equal sizes in
/// index order) and dropped into the first open bin with room. Returns the
/// item indices of each bin in opening order.
template <typename W>
std::vector<std::vector<std::size_t>> ffd_pack(std::span<const W> items, W capacity,
                                               double rel_tolerance = 1e-9) {
  if (!(capacity > W{0})) throw DomainError("ffd_pack: capacity must be positive");
  const auto limit = static_cast<double>(capacity) * (1.0 + rel_tolerance);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!(items[i] >= W{0}))
      throw DomainError("ffd_pack: item " + std::to_string(i) + " has negative size");
    if (static_cast<double>(items[i]) > limit)
      throw DomainError("ffd_pack: item " + std::to_string(i) + " of size " +
                        std::to_string(static_cast<double>(items[i])) + " exceeds bin capacity " +
                        std::to_string(static_cast<double>(capacity)));
  }
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return items[a] > items[b]; });

  std::vector<std::vector<std::size_t>> bins;
  std::vector<double> fill;
  for (std::size_t i : order) {
    const auto size = static_cast<double>(items[i]);
    std::size_t b = 0;
    while (b < bins.size() && fill[b] + size > limit) ++b;
    if (b == bins.size()) {
      bins.emplace_back();
      fill.push_back(0.0);
    }
    bins[b].push_back(i);
    fill[b] += size;
  }
  return bins;
}

template <typename W>
std::vector<std::vector<std::size_t>> ffd_pack(const std::vector<W>& items, W capacity,
                                               double rel_tolerance = 1e-9) {
  return ffd_pack(std::span<const W>(items), capacity, rel_tolerance);
}

}  // namespace greendcn::graphkit
