#include "razak_forge/blocks.hpp"
#include "razak_forge/solve.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace razak_forge;

namespace {

EigenmapInventory coords_only(const Int& k, const Int& l, const Int& m, std::size_t unflipped, std::size_t flipped,
                              const Int& cube_dim = 1) {
  std::vector<Eigenmap> maps;
  std::size_t axis = 0;
  for (std::size_t i = 0; i < unflipped; ++i) maps.emplace_back(Coord{axis++, false});
  for (std::size_t i = 0; i < flipped; ++i) maps.emplace_back(Coord{axis++, true});
  const Int p(maps.size());
  return EigenmapInventory(BlockParams{k, cube_dim}, l, axis, m, 0, std::move(maps), m * (l + 1) - p * (k + 1));
}

std::size_t count_kind(const EigenmapInventory& inv, bool coord, bool flipped = false) {
  std::size_t n = 0;
  for (const auto& e : inv.eigenmaps()) {
    if (coord && e.is_coord() && e.coord().flipped == flipped) ++n;
    if (!coord && !e.is_coord()) ++n;
  }
  return n;
}

}  // namespace

TEST(Profile, AllUnflipped) {
  const auto inv = coords_only(1, 2, 2, 3, 0);
  const auto prof = profile_of(inv);
  EXPECT_EQ(prof, (EndpointProfile{3, 0, 0, 3, 0, {}, {}}));
}

TEST(Profile, MixedDirectCount) {
  std::vector<Eigenmap> maps{Coord{0, false}, Coord{0, true}, Path{EndpointImage::free(1), EndpointImage::free(1)}};
  const EigenmapInventory inv(BlockParams{1}, 2, 1, 2, 1, std::move(maps), 0);
  const auto prof = profile_of(inv);
  EXPECT_EQ(prof, (EndpointProfile{1, 1, 1, 1, 1, {1}, {1}}));
}

TEST(Profile, SynthesizedFamily111) {
  const auto prof = profile_of(synthesize_inventory(family(1, 1, 1)));
  EXPECT_EQ(prof.a0, 6);
  EXPECT_EQ(prof.a1, 1);
  EXPECT_EQ(prof.b0, 2);
  EXPECT_EQ(prof.b1, 4);
  EXPECT_EQ(prof.s, 1u);
  EXPECT_EQ(prof.free_y0, std::vector<Int>{4});
  EXPECT_EQ(prof.free_y1, std::vector<Int>{5});
}

TEST(Inventory, ConstructorEnforcesSizeIdentity) {
  std::vector<Eigenmap> maps{Coord{0, false}};
  EXPECT_THROW(EigenmapInventory(BlockParams{1}, 1, 1, 1, 0, maps, 1), std::invalid_argument);
  EXPECT_NO_THROW(EigenmapInventory(BlockParams{1}, 1, 1, 1, 0, maps, 0));
  EXPECT_THROW(EigenmapInventory(BlockParams{1}, 1, 1, 2, 0, {Coord{3, false}}, 2), std::invalid_argument);
  EXPECT_THROW(EigenmapInventory(BlockParams{1}, 1, 1, 2, 0, {Path{EndpointImage::free(1), EndpointImage::x0()}}, 2),
               std::invalid_argument);
}

TEST(Admissible, Family111) {
  const auto v = check_admissible(synthesize_inventory(family(1, 1, 1)));
  EXPECT_TRUE(v.admissible);
  ASSERT_TRUE(v.q_witness);
  EXPECT_EQ(*v.q_witness, 1);
}

TEST(Admissible, Family121) {
  const auto x = family(1, 2, 1);
  EXPECT_EQ(x.k * x.a0 + (x.k + 1) * x.a1, 30);
  EXPECT_EQ(x.k * x.b0 + (x.k + 1) * x.b1, 36);
  const auto v = check_admissible(synthesize_inventory(x));
  EXPECT_TRUE(v.admissible);
  EXPECT_EQ(*v.q_witness, 2);
}

TEST(Admissible, PerturbedB0FailsCountAtY1) {
  const auto x = family(1, 2, 1);
  auto prof = profile_of(synthesize_inventory(x));
  prof.b0 = 4;
  const auto v = check_admissible(prof, {x.k, x.l, x.m, x.p});
  EXPECT_FALSE(v.admissible);
  EXPECT_FALSE(v.q_witness);
  ASSERT_FALSE(v.violations.empty());
  EXPECT_EQ(v.violations[0].equation, "count_y1");
  EXPECT_EQ(v.violations[0].lhs, 19);
  EXPECT_EQ(v.violations[0].rhs, 20);
}

TEST(Admissible, WrongFreeMultiplicity) {
  const auto x = family(1, 1, 1);
  auto prof = profile_of(synthesize_inventory(x));
  prof.free_y0[0] -= 1;
  prof.a0 += 1;
  const auto v = check_admissible(prof, {x.k, x.l, x.m, x.p});
  EXPECT_FALSE(v.admissible);
  EXPECT_EQ(v.violations[0].equation, "free_mult_y0[z1]");
}

TEST(Admissible, QWitnessAgreesWithExhaustiveSearch) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(0, 12);
  for (int i = 0; i < 3000; ++i) {
    const Int k = d(rng) % 4 + 1, l = d(rng) % 5 + 1, m = d(rng) + 1;
    const std::size_t s = static_cast<std::size_t>(d(rng) % 3);
    EndpointProfile prof{d(rng), d(rng), d(rng), d(rng), s, std::vector<Int>(s, l), std::vector<Int>(s, l + 1)};
    const Int p = prof.a0 + prof.a1 + Int(s) * l;
    const auto v = check_admissible(prof, {k, l, m, p});
    std::optional<Int> smallest;
    const Int slack = m - Int(s) * (k + 1);
    for (Int q = 0; q <= slack; ++q) {
      if (k * prof.a0 + (k + 1) * prof.a1 == (slack - q) * l && k * prof.b0 + (k + 1) * prof.b1 == (slack - q) * (l + 1) &&
          p == prof.b0 + prof.b1 + Int(s) * (l + 1)) {
        smallest = q;
        break;
      }
    }
    EXPECT_EQ(v.admissible, smallest.has_value());
    EXPECT_EQ(v.q_witness, smallest);
  }
}

TEST(Synthesize, Family111Counts) {
  const auto inv = synthesize_inventory(family(1, 1, 1));
  EXPECT_EQ(count_kind(inv, true, false), 4u);
  EXPECT_EQ(count_kind(inv, true, true), 1u);
  EXPECT_EQ(count_kind(inv, false), 6u);
  EXPECT_EQ(inv.zero_block(), 3);
}

TEST(Synthesize, Family122Counts) {
  const auto inv = synthesize_inventory(family(1, 2, 2));
  EXPECT_EQ(count_kind(inv, true, false), 12u);
  EXPECT_EQ(count_kind(inv, true, true), 4u);
  EXPECT_EQ(count_kind(inv, false), 10u);
  EXPECT_EQ(inv.p(), 26);
}

TEST(Synthesize, DegenerateHasNoFlips) {
  const CorrectedInstance x{1, 1, 2, 2, 0, 0, 0, 2, 0, 0, 2};
  ASSERT_TRUE(verify_instance(x).ok);
  const auto inv = synthesize_inventory(x);
  EXPECT_EQ(count_kind(inv, true, true), 0u);
  EXPECT_EQ(count_kind(inv, true, false), 2u);
}

TEST(Synthesize, RejectsUnverifiedInstance) {
  auto x = family(1, 1, 1);
  x.r += 1;
  EXPECT_THROW(synthesize_inventory(x), std::invalid_argument);
}

TEST(Synthesize, GreedyPairingIsDeterministic) {
  const auto a = synthesize_inventory(family(2, 3, 2));
  const auto b = synthesize_inventory(family(2, 3, 2));
  ASSERT_EQ(a.eigenmaps().size(), b.eigenmaps().size());
  for (std::size_t i = 0; i < a.eigenmaps().size(); ++i) {
    EXPECT_EQ(a.eigenmaps()[i].endpoint0().to_string(), b.eigenmaps()[i].endpoint0().to_string());
    EXPECT_EQ(a.eigenmaps()[i].endpoint1().to_string(), b.eigenmaps()[i].endpoint1().to_string());
  }
}

TEST(BlocksProperty, RoundTripAndAdmissibilityOverFamily) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> d(1, 10);
  for (int i = 0; i < 300; ++i) {
    const auto x = family(d(rng), d(rng), d(rng));
    const auto inv = synthesize_inventory(x);
    const auto prof = profile_of(inv);
    EXPECT_EQ(prof.a0, x.a0);
    EXPECT_EQ(prof.a1, x.a1);
    EXPECT_EQ(prof.b0, x.b0);
    EXPECT_EQ(prof.b1, x.b1);
    EXPECT_EQ(Int(prof.s), x.s);
    EXPECT_EQ(prof.free_y0, std::vector<Int>(prof.s, x.l));
    EXPECT_EQ(prof.free_y1, std::vector<Int>(prof.s, x.l + 1));
    const auto v = check_admissible(inv);
    EXPECT_TRUE(v.admissible);
    EXPECT_EQ(v.q_witness, x.k * x.s);
  }
}

TEST(BlocksProperty, RoundTripOverEnumeratedSolutions) {
  SearchBounds b;
  b.k = {1, 3};
  b.l = {1, 6};
  b.s = {0, 2};
  b.m = {1, 20};
  const auto xs = enumerate_corrected(b);
  ASSERT_GT(xs.size(), 100u);
  for (const auto& x : xs) {
    const auto inv = synthesize_inventory(x);
    const auto prof = profile_of(inv);
    EXPECT_EQ(prof.a0, x.a0);
    EXPECT_EQ(prof.b0, x.b0);
    EXPECT_EQ(prof.a1, x.a1);
    EXPECT_EQ(prof.b1, x.b1);
    const auto v = check_admissible(inv);
    ASSERT_TRUE(v.admissible);
    EXPECT_EQ(*v.q_witness, x.q);
  }
}

TEST(BlocksProperty, CountingIdentityOnRandomInventories) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> d(0, 3);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t s = static_cast<std::size_t>(d(rng));
    auto end = [&]() {
      const int c = d(rng);
      if (s > 0 && c >= 2) return EndpointImage::free(static_cast<std::size_t>(d(rng)) % s + 1);
      return c % 2 == 0 ? EndpointImage::x0() : EndpointImage::x1();
    };
    std::vector<Eigenmap> maps;
    const int n = d(rng) + d(rng) + 1;
    for (int i = 0; i < n; ++i) {
      if (d(rng) == 0) {
        maps.emplace_back(Coord{static_cast<std::size_t>(d(rng)), d(rng) % 2 == 1});
      } else {
        maps.emplace_back(Path{end(), end()});
      }
    }
    const Int p(maps.size());
    const Int k = 1, l = 1;
    const Int m = p + 1;
    const EigenmapInventory inv(BlockParams{k}, l, 4, m, s, std::move(maps), m * (l + 1) - p * (k + 1));
    const auto prof = profile_of(inv);
    Int f0 = 0, f1 = 0;
    for (const auto& x : prof.free_y0) f0 += x;
    for (const auto& x : prof.free_y1) f1 += x;
    EXPECT_EQ(prof.a0 + prof.a1 + f0, p);
    EXPECT_EQ(prof.b0 + prof.b1 + f1, p);
    if (prof.free_y0 == std::vector<Int>(s, l) && prof.free_y1 == std::vector<Int>(s, l + 1)) {
      EXPECT_EQ(prof.a0 + prof.a1 + Int(s) * l, p);
      EXPECT_EQ(prof.b0 + prof.b1 + Int(s) * (l + 1), p);
    }
  }
}

TEST(Coordinates, MinAndMaxPolicies) {
  const auto mn = coordinate_counts(15, 4, 6, 12);
  EXPECT_EQ(mn.unflipped, 12);
  EXPECT_EQ(mn.flipped, 4);
  const auto mx = coordinate_counts(15, 4, 6, 12, CountPolicy::max_based);
  EXPECT_EQ(mx.unflipped, 15);
  EXPECT_EQ(mx.flipped, 6);
}

TEST(Compose, IdentityPreservesCounts) {
  const auto x = synthesize_inventory(family(1, 2, 1));
  const auto id_after = coords_only(x.target_ell(), x.target_ell(), 1, 1, 0, x.target_cube_dim());
  const auto c = compose(id_after, x);
  EXPECT_EQ(counts_of(c), counts_of(x));
  EXPECT_EQ(profile_of(c), profile_of(x));
  const auto id_before = coords_only(x.source().k, x.source().k, 1, 1, 0);
  EXPECT_EQ(counts_of(compose(x, id_before)), counts_of(x));
}

TEST(Compose, FlipsCancelInPairs) {
  const auto inner = coords_only(1, 1, 2, 2, 0);
  const auto flips = coords_only(1, 1, 3, 0, 3);
  const auto flips_outer = coords_only(1, 1, 3, 0, 3, 3);
  const auto c = compose(flips_outer, flips);
  EXPECT_EQ(count_kind(c, true, false), 9u);
  EXPECT_EQ(count_kind(c, true, true), 0u);
  EXPECT_EQ(c.zero_block(), 0);
  EXPECT_EQ(count_kind(compose(coords_only(1, 1, 3, 0, 3, 2), inner), true, true), 6u);
}

TEST(Compose, SizeIdentityExample) {
  const auto inner = synthesize_inventory(family(1, 1, 1));
  ASSERT_EQ(inner.p(), 11);
  ASSERT_EQ(inner.zero_block(), 3);
  std::vector<Eigenmap> maps;
  for (std::size_t i = 0; i < 10; ++i) maps.emplace_back(Coord{i, false});
  for (std::size_t i = 10; i < 13; ++i) maps.emplace_back(Coord{i, true});
  for (int i = 0; i < 6; ++i) maps.emplace_back(Path{EndpointImage::x0(), EndpointImage::x1()});
  const EigenmapInventory outer(BlockParams{4, inner.target_cube_dim()}, 5, 13, 16, 0, std::move(maps), 1);
  ASSERT_EQ(outer.p(), 19);
  const auto c = compose(outer, inner);
  EXPECT_EQ(c.p(), 209);
  EXPECT_EQ(c.zero_block(), 19 * 3 + 1 * 5);
  EXPECT_EQ(c.multiplicity(), 80);
  EXPECT_EQ(c.multiplicity() * (c.target_ell() + 1), c.p() * (c.source().k + 1) + c.zero_block());
  EXPECT_EQ(counts_of(c), compose_counts(counts_of(outer), counts_of(inner)));
}

TEST(Compose, ChainingMismatchThrows) {
  const auto x = synthesize_inventory(family(1, 1, 1));
  const auto y = synthesize_inventory(family(1, 2, 1), x.target_cube_dim());
  EXPECT_THROW(compose(y, x), std::invalid_argument);
  const auto z = synthesize_inventory(family(1, 4, 1));
  EXPECT_THROW(compose(z, x), std::invalid_argument);
}

TEST(ComposeProperty, ChainedFamilyStages) {
  for (int k = 1; k <= 3; ++k) {
    for (int u = 1; u <= 2; ++u) {
      const auto inner = synthesize_inventory(family(1, k, u));
      const auto outer = synthesize_inventory(family(1, inner.target_ell(), 1), inner.target_cube_dim());
      const auto c = compose(outer, inner);
      const auto ci = counts_of(inner), co = counts_of(outer), cc = counts_of(c);
      EXPECT_EQ(cc, compose_counts(co, ci));
      EXPECT_GE(cc.unflipped, ci.flipped * co.flipped);
      EXPECT_EQ(cc.unflipped + cc.flipped, ci.unflipped * co.unflipped + ci.flipped * co.flipped +
                                               ci.unflipped * co.flipped + ci.flipped * co.unflipped);
      const auto prof = profile_of(c);
      Int f0 = 0, f1 = 0;
      for (const auto& x : prof.free_y0) f0 += x;
      for (const auto& x : prof.free_y1) f1 += x;
      EXPECT_EQ(prof.a0 + prof.a1 + f0, c.p());
      EXPECT_EQ(prof.b0 + prof.b1 + f1, c.p());
    }
  }
}

TEST(Obstruction, BothCertificatesZero) {
  const auto cert = derive_unital_obstruction();
  EXPECT_TRUE(cert.b0_vanishes.certified());
  EXPECT_TRUE(cert.a0_equals_m.certified());
  EXPECT_TRUE(cert.certified());
}

TEST(Obstruction, NumericSpotCheck) {
  const auto cert = derive_unital_obstruction();
  // k=3, l=2, s=1, b0=0; weight_y1 gives 4*b1 = (m-4)*3, so m=8, b1=3, p=6.
  const std::map<std::string, Int> at{{"k", 3}, {"l", 2}, {"s", 1}, {"b0", 0}, {"b1", 3}, {"m", 8},
                                      {"p", 6}, {"a0", 0}, {"a1", 0}, {"q", 0},  {"r", 0}};
  EXPECT_EQ(cert.b0_vanishes.target.eval(at), 0);
  Int combined = 0;
  for (const auto& [name, mult] : cert.b0_vanishes.combination) {
    for (const auto& r : system_residuals()) {
      if (r.name == name) combined += mult.eval(at) * r.poly.eval(at);
    }
  }
  EXPECT_EQ(combined, cert.b0_vanishes.target.eval(at));
}
