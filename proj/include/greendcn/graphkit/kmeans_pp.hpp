#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "greendcn/error.hpp"

namespace greendcn::graphkit {

struct EuclideanDistance {
  double operator()(std::span<const double> a, std::span<const double> b) const {
    if (a.size() != b.size()) throw DomainError("euclidean distance: length mismatch");
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(sq);
  }
};

/// k-means++ seeding: the first center is uniform, each further center is
/// drawn with probability proportional to the squared distance to its
/// nearest chosen center. When every remaining point coincides with a center
/// the draw falls back to uniform over the unchosen points.
template <typename Distance = EuclideanDistance>
std::vector<std::size_t> kmeans_pp_seed(std::span<const std::vector<double>> points, std::size_t k,
                                        std::uint64_t seed, Distance distance = {}) {
  const std::size_t n = points.size();
  if (k > n)
    throw DomainError("kmeans_pp_seed: k = " + std::to_string(k) + " exceeds " + std::to_string(n) +
                      " points");
  std::vector<std::size_t> centers;
  if (k == 0) return centers;
  centers.reserve(k);

  std::mt19937_64 rng(seed);
  std::vector<bool> chosen(n, false);
  std::vector<double> d2(n, 0.0);

  auto take = [&](std::size_t c, bool first) {
    centers.push_back(c);
    chosen[c] = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = distance(points[i], points[c]);
      d2[i] = first ? d * d : std::min(d2[i], d * d);
    }
  };

  take(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng), true);
  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (!chosen[i]) total += d2[i];
    std::size_t pick = n;
    if (total > 0.0) {
      double u = std::uniform_real_distribution<double>(0.0, total)(rng);
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i] || d2[i] <= 0.0) continue;
        pick = i;
        if (u < d2[i]) break;
        u -= d2[i];
      }
    } else {
      std::size_t r = std::uniform_int_distribution<std::size_t>(0, n - centers.size() - 1)(rng);
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i]) continue;
        if (r-- == 0) {
          pick = i;
          break;
        }
      }
    }
    take(pick, false);
  }
  return centers;
}

}  // namespace greendcn::graphkit
