#include "razak_forge/rank.hpp"
#include "razak_forge/solve.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace razak_forge;
using fixtures::random_rank;
using fixtures::random_triple;

namespace {

EigenmapInventory flip_pair() {
  return EigenmapInventory(BlockParams{1}, 1, 1, 2, 0, {Coord{0, false}, Coord{0, true}}, 0);
}

}  // namespace

TEST(Grid, ResolutionMustBeOddAndAtLeastThree) {
  EXPECT_THROW(Grid(1, 4), std::invalid_argument);
  EXPECT_THROW(Grid(1, 1), std::invalid_argument);
  EXPECT_THROW(Grid(0, 3), std::invalid_argument);
  EXPECT_THROW(Grid(40, 3), std::invalid_argument);
  const Grid g(2, 5);
  EXPECT_EQ(g.size(), 25u);
  EXPECT_EQ(g.index_of({1, 2}), 7u);
  EXPECT_EQ(g.coords_of(7), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(g.far_corner(), 24u);
}

TEST(RankFunction, RejectsValuesAboveFiberBound) {
  EXPECT_THROW(RankFunction(Grid(1, 3), {0, 1, 3}, 2), std::invalid_argument);
  EXPECT_THROW(RankFunction(Grid(1, 3), {0, 1}, 2), std::invalid_argument);
}

TEST(Pushforward, ZeroStaysZero) {
  const auto inv = synthesize_inventory(family(1, 1, 1));
  const Grid g(1, 3);
  PushforwardPlan plan{{{1}}, std::vector<std::optional<std::vector<std::size_t>>>(11, std::vector<std::size_t>{1})};
  const auto out = pushforward(RankFunction::constant(g, 0, 2), inv, plan);
  for (auto v : out.values()) EXPECT_EQ(v, 0u);
  EXPECT_EQ(out.grid().dim(), 5u);
}

TEST(Pushforward, ConstantScalesByP) {
  const auto inv = synthesize_inventory(family(1, 1, 1));
  const Grid g(1, 3);
  PushforwardPlan plan{{{2}}, std::vector<std::optional<std::vector<std::size_t>>>(11, std::vector<std::size_t>{0})};
  const auto out = pushforward(RankFunction::constant(g, 2, 2), inv, plan);
  for (auto v : out.values()) EXPECT_EQ(v, 22u);
  EXPECT_EQ(out.fiber_bound(), 2u / 2 * 5 * 5);
}

TEST(Pushforward, FlipPairOnOneAxis) {
  const RankFunction f(Grid(1, 3), {0, 1, 2}, 2);
  const auto out = pushforward(f, flip_pair(), {});
  EXPECT_EQ(out.values(), (std::vector<std::uint64_t>{2, 2, 2}));
  EXPECT_EQ(out.fiber_bound(), 4u);
}

TEST(Pushforward, Errors) {
  const RankFunction f(Grid(2, 3), std::vector<std::uint64_t>(9, 0), 2);
  EXPECT_THROW(pushforward(f, flip_pair(), {}), std::invalid_argument);
  const RankFunction odd_bound(Grid(1, 3), {0, 1, 1}, 1);
  EXPECT_THROW(pushforward(odd_bound, flip_pair(), {}), std::invalid_argument);
  const EigenmapInventory with_path(BlockParams{1}, 1, 1, 1, 0, {Path{EndpointImage::x0(), EndpointImage::x1()}}, 0);
  EXPECT_THROW(pushforward(RankFunction::constant(Grid(1, 3), 0, 2), with_path, {}), std::invalid_argument);
}

TEST(RankLeq, Examples) {
  const Grid g(1, 3);
  const auto a = RankFunction::constant(g, 3, 10);
  const auto b = RankFunction::constant(g, 4, 10);
  EXPECT_TRUE(rank_leq(a, a));
  EXPECT_TRUE(rank_leq(a, b, {4, 3}));
  EXPECT_FALSE(rank_leq(RankFunction::constant(g, 2, 2), RankFunction::constant(g, 1, 2)));
  EXPECT_THROW(rank_leq(a, RankFunction::constant(Grid(1, 5), 3, 10)), std::invalid_argument);
}

TEST(RankLeq, OverflowIsAnError) {
  const Grid g(1, 3);
  const auto big = RankFunction::constant(g, UINT64_MAX / 2, UINT64_MAX);
  EXPECT_THROW(rank_leq(big, big, {3, 1}), std::overflow_error);
  EXPECT_THROW(big + big + big, std::overflow_error);
}

TEST(Demo, ScaledConstantsSatisfyPerforationInequality) {
  const auto stage = build(Schedule{1}, 1)[0];
  const Grid g(1, 3);
  const std::uint64_t k = 3, c = 2;
  const auto rep = perforation_rank_demo(stage, k, 1, RankFunction::constant(g, k * c, 100),
                                         RankFunction::constant(g, (k + 1) * c, 100));
  EXPECT_TRUE(rep.perforation_inequality);
  EXPECT_TRUE(rep.dominated_by_n);
  EXPECT_FALSE(rep.disclaimer.empty());
}

TEST(Demo, PointwiseViolationRuleOutDomination) {
  const auto stage = build(Schedule{1}, 1)[0];
  const RankFunction a(Grid(1, 3), {5, 0, 0}, 10);
  const RankFunction b(Grid(1, 3), {2, 2, 2}, 10);
  const auto rep = perforation_rank_demo(stage, 1, 2, a, b);
  EXPECT_FALSE(rep.dominated_by_n);
  EXPECT_EQ(rep.domination_violation, 0u);
  EXPECT_FALSE(rep.perforation_inequality);
}

TEST(Demo, WitnessDimensionMustMatchStage) {
  const auto stages = build(Schedule{1}, 2);
  const auto f = RankFunction::constant(Grid(1, 3), 1, 2);
  EXPECT_THROW(perforation_rank_demo(stages[1], 1, 1, f, f), std::invalid_argument);
  EXPECT_THROW(perforation_rank_demo(stages[0], 1, 1, f, RankFunction::constant(Grid(1, 5), 1, 2)),
               std::invalid_argument);
}

TEST(Demo, PushforwardPreservesPerforationVerdict) {
  const auto stages = build(Schedule{1}, 2);
  const auto inv = synthesize_inventory(family(1, 1, 1));
  ASSERT_EQ(inv.target_cube_dim(), stages[1].cube_dim);
  const Grid g(1, 3);
  std::mt19937_64 rng(31);
  PushforwardPlan plan{{{1}}, {}};
  for (std::size_t i = 0; i < inv.eigenmaps().size(); ++i) plan.path_points.emplace_back(std::vector<std::size_t>{1});
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_rank(rng, g, 4);
    const auto b = RankFunction(g, {a[0] + a[0] / 2 + 1, a[1] + a[1] / 2 + 1, a[2] + a[2] / 2 + 1}, 8);
    const auto before = perforation_rank_demo(stages[0], 2, 1, a, b);
    const auto pa = pushforward(RankFunction(g, a.values(), 8), inv, plan);
    const auto pb = pushforward(b, inv, plan);
    const auto after = perforation_rank_demo(stages[1], 2, 1, pa, pb);
    if (before.perforation_inequality) EXPECT_TRUE(after.perforation_inequality);
  }
}

TEST(RankProperty, AdditivityMonotonicityEndpointsAndSize) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const auto t = random_triple(rng);
    const auto a = random_rank(rng, t.dom, 6);
    const auto c = random_rank(rng, t.dom, 4);
    const auto b = a + c;
    const auto pa = pushforward(a, t.inv, t.plan);
    const auto pb = pushforward(b, t.inv, t.plan);
    const auto pc = pushforward(c, t.inv, t.plan);
    EXPECT_EQ(pb, pa + pc);
    EXPECT_TRUE(rank_leq(pa, pb));

    const auto prof = profile_of(t.inv);
    auto free_value = [&](std::size_t j) { return a[t.dom.index_of(t.plan.free_points[j])]; };
    std::uint64_t at_y0 = static_cast<std::uint64_t>(prof.a0) * a[t.dom.origin()] +
                          static_cast<std::uint64_t>(prof.a1) * a[t.dom.far_corner()];
    std::uint64_t at_y1 = static_cast<std::uint64_t>(prof.b0) * a[t.dom.origin()] +
                          static_cast<std::uint64_t>(prof.b1) * a[t.dom.far_corner()];
    for (std::size_t j = 0; j < prof.s; ++j) {
      at_y0 += static_cast<std::uint64_t>(prof.free_y0[j]) * free_value(j);
      at_y1 += static_cast<std::uint64_t>(prof.free_y1[j]) * free_value(j);
    }
    EXPECT_EQ(pa[pa.grid().origin()], at_y0);
    EXPECT_EQ(pa[pa.grid().far_corner()], at_y1);

    const std::uint64_t p = static_cast<std::uint64_t>(t.inv.p());
    const std::uint64_t F = a.fiber_bound();
    for (auto v : pa.values()) EXPECT_LE(v, p * F);
    EXPECT_EQ(pa.fiber_bound() - p * F, static_cast<std::uint64_t>(t.inv.zero_block()) * F / 2);
  }
}
