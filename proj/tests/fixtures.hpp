#pragma once

// Random inventories, plans and rank functions for property checks.

#include "razak_forge/rank.hpp"

#include <random>

namespace fixtures {

using namespace razak_forge;

struct Triple {
  EigenmapInventory inv;
  PushforwardPlan plan;
  Grid dom;
};

inline Triple random_triple(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coin(0, 1), small(0, 3);
  const std::size_t D = static_cast<std::size_t>(coin(rng) + 1);
  const std::size_t g = coin(rng) ? 5 : 3;
  const std::size_t blocks = static_cast<std::size_t>(coin(rng) + 1);
  const std::size_t s = static_cast<std::size_t>(small(rng));
  const Grid dom(D, g);
  std::uniform_int_distribution<std::size_t> p_dist(1, 30), axis(0, blocks - 1), pt(0, g - 1);
  auto point = [&] {
    std::vector<std::size_t> c(D);
    for (auto& x : c) x = pt(rng);
    return c;
  };
  auto end = [&]() {
    const int c = small(rng);
    if (s > 0 && c >= 2) return EndpointImage::free(static_cast<std::size_t>(small(rng)) % s + 1);
    return c == 0 ? EndpointImage::x0() : EndpointImage::x1();
  };
  const std::size_t p = p_dist(rng);
  std::vector<Eigenmap> maps;
  PushforwardPlan plan;
  for (std::size_t j = 0; j < s; ++j) plan.free_points.push_back(point());
  for (std::size_t i = 0; i < p; ++i) {
    if (coin(rng)) {
      maps.emplace_back(Coord{axis(rng), coin(rng) == 1});
      plan.path_points.emplace_back(std::nullopt);
    } else {
      maps.emplace_back(Path{end(), end()});
      plan.path_points.emplace_back(point());
    }
  }
  // k = 1, l = 1: fibers of size 2 on both sides; m = p + extra leaves r = 2 * extra.
  const Int extra = small(rng);
  EigenmapInventory inv(BlockParams{1, Int(D)}, 1, blocks, Int(p) + extra, s, std::move(maps), 2 * extra);
  return {std::move(inv), std::move(plan), dom};
}

inline RankFunction random_rank(std::mt19937_64& rng, const Grid& grid, std::uint64_t bound) {
  std::uniform_int_distribution<std::uint64_t> d(0, bound);
  std::vector<std::uint64_t> v(grid.size());
  for (auto& x : v) x = d(rng);
  return RankFunction(grid, std::move(v), bound);
}

}  // namespace fixtures
