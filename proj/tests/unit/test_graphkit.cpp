#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "greendcn/graphkit.hpp"

using namespace greendcn;
using namespace greendcn::graphkit;
using Catch::Approx;

namespace {

WeightedGraph<double> random_graph(std::mt19937_64& rng, std::size_t n, double density) {
  WeightedGraph<double> g(n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (u(rng) < density) g.add_edge(a, b, std::floor(1.0 + 9.0 * u(rng)));
  return g;
}

// Minimum s-t cut by enumerating every side assignment of the other vertices.
double brute_min_cut(const WeightedGraph<double>& g, std::size_t s, std::size_t t) {
  const std::size_t n = g.vertex_count();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    if (!((mask >> s) & 1) || ((mask >> t) & 1)) continue;
    std::vector<bool> side(n);
    for (std::size_t v = 0; v < n; ++v) side[v] = (mask >> v) & 1;
    best = std::min(best, g.cut_weight(side));
  }
  return best;
}

// Minimum weight over every partition into exactly k non-empty blocks.
double brute_k_cut(const WeightedGraph<double>& g, std::size_t k) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> label(n, 0);
  double best = std::numeric_limits<double>::infinity();
  // Restricted growth strings enumerate set partitions once each.
  auto rec = [&](auto&& self, std::size_t v, std::size_t used) -> void {
    if (v == n) {
      if (used == k) best = std::min(best, g.cut_weight(std::span<const std::size_t>(label)));
      return;
    }
    for (std::size_t b = 0; b <= std::min(used, k - 1); ++b) {
      label[v] = b;
      self(self, v + 1, std::max(used, b + 1));
    }
  };
  rec(rec, 0, 0);
  return best;
}

// Fewest bins for the items, by trying every assignment with pruning.
std::size_t brute_bins(const std::vector<double>& items, double cap) {
  std::vector<double> sorted = items;
  std::sort(sorted.rbegin(), sorted.rend());
  std::size_t best = sorted.size();
  std::vector<double> fill;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (fill.size() >= best) return;
    if (i == sorted.size()) {
      best = fill.size();
      return;
    }
    for (std::size_t b = 0; b < fill.size(); ++b)
      if (fill[b] + sorted[i] <= cap + 1e-12) {
        fill[b] += sorted[i];
        self(self, i + 1);
        fill[b] -= sorted[i];
      }
    fill.push_back(sorted[i]);
    self(self, i + 1);
    fill.pop_back();
  };
  rec(rec, 0);
  return best;
}

}  // namespace

TEST_CASE("max flow basics") {
  WeightedGraph<double> one(2);
  one.add_edge(0, 1, 5);
  CHECK(max_flow_min_cut(one, 0, 1).value == 5.0);

  WeightedGraph<double> path(3);
  path.add_edge(0, 1, 1);
  path.add_edge(1, 2, 5);
  const auto c = max_flow_min_cut(path, 0, 2);
  CHECK(c.value == 1.0);
  CHECK(c.source_side[0]);
  CHECK_FALSE(c.source_side[2]);

  CHECK_THROWS_AS(max_flow_min_cut(path, 1, 1), DomainError);
  CHECK_THROWS_AS(max_flow_min_cut(path, 0, 3), DomainError);
}

TEST_CASE("graph rejects bad edges") {
  WeightedGraph<double> g(3);
  CHECK_THROWS_AS(g.add_edge(0, 0, 1), DomainError);
  CHECK_THROWS_AS(g.add_edge(0, 3, 1), DomainError);
  CHECK_THROWS_AS(g.add_edge(0, 1, -1), DomainError);
  CHECK_THROWS_AS(g.add_edge(0, 1, std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("max flow equals brute-force min cut on random graphs") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const auto g = random_graph(rng, n, 0.6);
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = 0; t < n; ++t) {
        if (s == t) continue;
        const auto cut = max_flow_min_cut(g, s, t);
        const double brute = brute_min_cut(g, s, t);
        CHECK(cut.value == Approx(brute));
        CHECK(cut.source_side[s]);
        CHECK_FALSE(cut.source_side[t]);
        CHECK(g.cut_weight(cut.source_side) == Approx(cut.value));
      }
  }
}

TEST_CASE("Gomory-Hu tree on small shapes") {
  WeightedGraph<double> tri(3);
  tri.add_edge(0, 1, 1);
  tri.add_edge(1, 2, 1);
  tri.add_edge(0, 2, 1);
  const auto t = gomory_hu_tree(tri);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b) CHECK(t.min_cut(a, b) == 2.0);

  WeightedGraph<double> star(5);
  const double w[] = {3, 1, 4, 2};
  for (std::size_t i = 0; i < 4; ++i) star.add_edge(0, i + 1, w[i]);
  const auto st = gomory_hu_tree(star);
  for (std::size_t i = 1; i <= 4; ++i)
    for (std::size_t x = 0; x <= 4; ++x)
      if (x != i) CHECK(st.min_cut(i, x) == std::min(w[i - 1], x == 0 ? w[i - 1] : w[x - 1]));

  WeightedGraph<double> apart(4);
  apart.add_edge(0, 1, 2);
  apart.add_edge(2, 3, 7);
  const auto at = gomory_hu_tree(apart);
  CHECK(at.min_cut(0, 2) == 0.0);
  CHECK(at.min_cut(2, 3) == 7.0);
}

TEST_CASE("Gomory-Hu tree matches pairwise max flow") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const auto g = random_graph(rng, n, 0.3 + 0.1 * (trial % 6));
    const auto tree = gomory_hu_tree(g);
    REQUIRE(tree.parent.size() == n);
    // Spanning: every vertex reaches the root.
    for (std::size_t v = 0; v < n; ++v) {
      std::size_t x = v, steps = 0;
      while (x != 0 && steps++ <= n) x = tree.parent[x];
      CHECK(x == 0);
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        CHECK(tree.min_cut(a, b) == Approx(max_flow_min_cut(g, a, b).value));
    // Each tree edge is itself a minimum cut between its endpoints.
    for (std::size_t v = 1; v < n; ++v)
      CHECK(g.cut_weight(tree.subtree_side(v)) == Approx(tree.weight[v]));
  }
}

TEST_CASE("min k-cut examples") {
  WeightedGraph<double> path(3);
  path.add_edge(0, 1, 1);
  path.add_edge(1, 2, 5);
  const auto one = min_k_cut(path, 1);
  CHECK(one.blocks.size() == 1);
  CHECK(one.weight == 0.0);
  const auto two = min_k_cut(path, 2);
  REQUIRE(two.blocks.size() == 2);
  CHECK(two.blocks[0] == std::vector<std::size_t>{0});
  CHECK(two.blocks[1] == std::vector<std::size_t>{1, 2});
  CHECK(two.weight == 1.0);
  const auto three = min_k_cut(path, 3);
  CHECK(three.blocks.size() == 3);
  CHECK(three.weight == 6.0);
  CHECK_THROWS_AS(min_k_cut(path, 0), DomainError);
  CHECK_THROWS_AS(min_k_cut(path, 4), DomainError);
}

TEST_CASE("min k-cut is a partition within the approximation bound") {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + trial % 4;
    const auto g = random_graph(rng, n, 0.7);
    for (std::size_t k = 2; k <= std::min<std::size_t>(3, n); ++k) {
      const auto cut = min_k_cut(g, k);
      REQUIRE(cut.blocks.size() == k);
      std::vector<std::size_t> label(n, k);
      for (std::size_t b = 0; b < k; ++b) {
        CHECK_FALSE(cut.blocks[b].empty());
        for (std::size_t v : cut.blocks[b]) {
          CHECK(label[v] == k);
          label[v] = b;
        }
      }
      for (std::size_t v = 0; v < n; ++v) CHECK(label[v] < k);
      CHECK(cut.weight == Approx(g.cut_weight(std::span<const std::size_t>(label))));
      const double opt = brute_k_cut(g, k);
      CHECK(cut.weight <= 2.0 * (1.0 - 1.0 / static_cast<double>(k)) * opt + 1e-9);
    }
  }
}

TEST_CASE("min k-cut merges surplus components") {
  // Any three-way split of this star cuts two unit edges.
  WeightedGraph<double> g(4);
  g.add_edge(0, 1, 1);
  g.add_edge(0, 2, 1);
  g.add_edge(0, 3, 1);
  const auto cut = min_k_cut(g, 3);
  CHECK(cut.blocks.size() == 3);
  CHECK(cut.weight == 2.0);
}

TEST_CASE("k-means++ seeding") {
  std::vector<std::vector<double>> pts{{0, 0}, {1, 0}, {5, 5}, {6, 5}};
  CHECK_THROWS_AS(kmeans_pp_seed(std::span<const std::vector<double>>(pts), 5, 1), DomainError);
  const auto all = kmeans_pp_seed(std::span<const std::vector<double>>(pts), 4, 9);
  CHECK(std::set<std::size_t>(all.begin(), all.end()).size() == 4);
  CHECK(kmeans_pp_seed(std::span<const std::vector<double>>(pts), 2, 3) ==
        kmeans_pp_seed(std::span<const std::vector<double>>(pts), 2, 3));

  // Coincident points still yield distinct centers.
  std::vector<std::vector<double>> same(5, std::vector<double>{1, 1});
  const auto s = kmeans_pp_seed(std::span<const std::vector<double>>(same), 3, 4);
  CHECK(std::set<std::size_t>(s.begin(), s.end()).size() == 3);
}

TEST_CASE("k-means++ first center is uniform") {
  const std::size_t n = 8;
  std::vector<std::vector<double>> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({static_cast<double>(i)});
  std::vector<int> hits(n, 0);
  const int runs = 10000;
  for (int s = 0; s < runs; ++s)
    ++hits[kmeans_pp_seed(std::span<const std::vector<double>>(pts), 1, static_cast<std::uint64_t>(s))[0]];
  const double p = 1.0 / n;
  const double sigma = std::sqrt(runs * p * (1 - p));
  for (int h : hits) CHECK(std::abs(h - runs * p) <= 5 * sigma);
}

TEST_CASE("k-means++ separates distant clusters") {
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 10; ++i) pts.push_back({0.01 * i, 0.0});
  for (int i = 0; i < 10; ++i) pts.push_back({100.0 + 0.01 * i, 50.0});
  int split = 0;
  for (int s = 0; s < 1000; ++s) {
    const auto c = kmeans_pp_seed(std::span<const std::vector<double>>(pts), 2, static_cast<std::uint64_t>(s));
    if ((c[0] < 10) != (c[1] < 10)) ++split;
  }
  CHECK(split >= 990);
}

TEST_CASE("first-fit decreasing") {
  const std::vector<double> items{7, 5, 4, 3, 1};
  const auto bins = ffd_pack(items, 10.0);
  REQUIRE(bins.size() == 2);
  CHECK(bins[0] == std::vector<std::size_t>{0, 3});
  CHECK(bins[1] == std::vector<std::size_t>{1, 2, 4});
  CHECK(ffd_pack(std::vector<double>{}, 10.0).empty());
  try {
    ffd_pack(std::vector<double>{1, 12, 3}, 10.0);
    FAIL("expected an oversize error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("item 1") != std::string::npos);
  }
  // Equal sizes keep index order.
  const auto ties = ffd_pack(std::vector<int>{2, 2, 2}, 4);
  CHECK(ties[0] == std::vector<std::size_t>{0, 1});
}

TEST_CASE("first-fit decreasing against exhaustive packing") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 12;
    std::vector<double> items(n);
    for (double& x : items) x = std::round(1.0 + 99.0 * u(rng));
    const auto bins = ffd_pack(items, 100.0);
    std::vector<int> seen(n, 0);
    for (const auto& b : bins) {
      double fill = 0.0;
      for (std::size_t i : b) {
        fill += items[i];
        ++seen[i];
      }
      CHECK(fill <= 100.0);
    }
    for (int s : seen) CHECK(s == 1);
    const std::size_t opt = brute_bins(items, 100.0);
    CHECK(bins.size() <= opt + 1);
    CHECK(static_cast<double>(bins.size()) <= std::ceil(11.0 / 9.0 * static_cast<double>(opt)) + 1);
  }
}
