#include "lk/spectral.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "lk/norms.hpp"

using lk::BlockIndex;
using lk::CatalogSpec;
using lk::CrossSpec;
using lk::FreqIndex;
using lk::SpectralFunction;

TEST(Analyze, SingleExponential) {
  const int k[] = {1, 0};
  const auto f = lk::sample(CatalogSpec::exponential(k), {8, 8});
  const auto g = lk::analyze(f);
  ASSERT_EQ(g.coeffs.size(), 1u);
  const FreqIndex expect{1, 0, 0, 0};
  EXPECT_NEAR(std::abs(g.coeffs.at(expect) - 1.0), 0.0, 1e-12);
}

TEST(Analyze, ConstantAndTwoTerm) {
  const auto c = lk::sample(CatalogSpec::constant(1, 1.0), {16});
  const auto gc = lk::analyze(c);
  ASSERT_EQ(gc.coeffs.size(), 1u);
  EXPECT_NEAR(std::abs(gc.coeffs.at({0, 0, 0, 0}) - 1.0), 0.0, 1e-12);

  // 3 e^{i2x} + 4 e^{-i3x} on N=16
  const auto f = lk::sample(CatalogSpec::parse("sum:3@2;4@-3", 1), {16});
  const auto g = lk::analyze(f);
  ASSERT_EQ(g.coeffs.size(), 2u);
  EXPECT_NEAR(std::abs(g.coeffs.at({2, 0, 0, 0}) - 3.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(g.coeffs.at({-3, 0, 0, 0}) - 4.0), 0.0, 1e-12);
}

TEST(Analyze, NonPowerOfTwoGrid) {
  const auto f = lk::sample(CatalogSpec::parse("sum:2@1;5@-2", 1), {12});
  const auto g = lk::analyze(f);
  ASSERT_EQ(g.coeffs.size(), 2u);
  EXPECT_NEAR(std::abs(g.coeffs.at({1, 0, 0, 0}) - 2.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(g.coeffs.at({-2, 0, 0, 0}) - 5.0), 0.0, 1e-12);
}

TEST(Synthesize, ConstantEmptyAndRoundTrip) {
  SpectralFunction c;
  c.dims = 2;
  c.coeffs[{0, 0, 0, 0}] = {2.5, 0.0};
  const auto f = lk::synthesize(c, {4, 4});
  for (const auto& z : f.values) EXPECT_NEAR(std::abs(z - 2.5), 0.0, 1e-13);

  SpectralFunction empty;
  empty.dims = 1;
  const auto zf = lk::synthesize(empty, {8});
  for (const auto& z : zf.values) EXPECT_EQ(z, std::complex<double>(0.0, 0.0));

  // random sparse spectrum round-trips through a Nyquist-adequate grid
  SpectralFunction g;
  g.dims = 2;
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> freq(-7, 7);
  std::uniform_real_distribution<double> amp(-2.0, 2.0);
  for (int i = 0; i < 12; ++i)
    g.coeffs[{freq(rng), freq(rng), 0, 0}] = {amp(rng), amp(rng)};
  const auto back = lk::analyze(lk::synthesize(g, {16, 16}));
  ASSERT_EQ(back.coeffs.size(), g.coeffs.size());
  for (const auto& [k, a] : g.coeffs) EXPECT_NEAR(std::abs(back.coeffs.at(k) - a), 0.0, 1e-12);
}

TEST(Synthesize, AliasingGuard) {
  SpectralFunction g;
  g.dims = 1;
  g.coeffs[{5, 0, 0, 0}] = {1.0, 0.0};
  EXPECT_THROW(lk::synthesize(g, {8}), std::invalid_argument);
  EXPECT_NO_THROW(lk::synthesize(g, {11}));
}

TEST(Parseval, SpectrumVsGridNorm) {
  SpectralFunction g;
  g.dims = 2;
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> freq(-5, 5);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  for (int i = 0; i < 9; ++i) g.coeffs[{freq(rng), freq(rng), 0, 0}] = {amp(rng), amp(rng)};
  double sum2 = 0.0;
  for (const auto& [k, a] : g.coeffs) sum2 += std::norm(a);
  const double l2 = lk::lp_norm_reference(lk::synthesize(g, {16, 16}), 2.0);
  EXPECT_NEAR(l2 * l2, sum2, 1e-10 * sum2);
}

TEST(RhoSet, SmallShells) {
  const auto zero = lk::rho_set(BlockIndex{{0, 0, 0, 0}}, 2);
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0], (FreqIndex{0, 0, 0, 0}));

  const auto s2 = lk::rho_set(BlockIndex{{2, 0, 0, 0}}, 1);
  std::set<int> got;
  for (const auto& k : s2) got.insert(k[0]);
  EXPECT_EQ(got, (std::set<int>{-3, -2, 2, 3}));

  const BlockIndex s12{{1, 2, 0, 0}};
  EXPECT_EQ(lk::rho_set(s12, 2).size(), 8u);
  EXPECT_EQ(lk::rho_size(s12, 2), 8u);
}

TEST(RhoSet, ShellOfInverts) {
  for (int s = 0; s <= 6; ++s)
    for (const auto& k : lk::rho_set(BlockIndex{{s, 0, 0, 0}}, 1)) EXPECT_EQ(lk::shell_of(k[0]), s);
}

TEST(DyadicBlock, PartitionReassembles) {
  SpectralFunction g;
  g.dims = 2;
  std::mt19937 rng(123);
  std::uniform_int_distribution<int> freq(-9, 9);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) g.coeffs[{freq(rng), freq(rng), 0, 0}] = {amp(rng), amp(rng)};

  const auto blocks = lk::support_blocks(g);
  std::size_t total = 0;
  SpectralFunction sum;
  sum.dims = 2;
  for (const auto& s : blocks) {
    const auto blk = lk::dyadic_block(g, s);
    EXPECT_FALSE(blk.coeffs.empty());
    for (const auto& [k, a] : blk.coeffs) {
      EXPECT_EQ(lk::block_of(k, 2), s); // membership oracle
      sum.coeffs[k] += a;
      ++total;
    }
  }
  EXPECT_EQ(total, g.coeffs.size()); // pairwise disjoint support
  for (const auto& [k, a] : g.coeffs) EXPECT_EQ(sum.coeffs.at(k), a);
}

TEST(DyadicBlock, SingleCoefficient) {
  SpectralFunction g;
  g.dims = 2;
  g.coeffs[{1, 0, 0, 0}] = {1.0, 0.0};
  EXPECT_EQ(lk::dyadic_block(g, BlockIndex{{1, 0, 0, 0}}).coeffs.size(), 1u);
  EXPECT_TRUE(lk::dyadic_block(g, BlockIndex{{2, 0, 0, 0}}).coeffs.empty());

  SpectralFunction f;
  f.dims = 1;
  f.coeffs[{2, 0, 0, 0}] = {3.0, 0.0};
  const auto blk = lk::dyadic_block(f, BlockIndex{{2, 0, 0, 0}});
  ASSERT_EQ(blk.coeffs.size(), 1u);
  EXPECT_EQ(blk.coeffs.at({2, 0, 0, 0}), std::complex<double>(3.0, 0.0));
}

TEST(CrossBlocks, EnumerationAndCounts) {
  CrossSpec spec{2, {1.0, 1.0}, 3.0};
  const auto blocks = lk::cross_blocks(spec);
  EXPECT_EQ(blocks.size(), 6u);
  std::size_t freqs = 0;
  for (const auto& b : blocks) freqs += lk::rho_size(b, 2);
  EXPECT_EQ(freqs, 17u);

  EXPECT_TRUE(lk::cross_blocks(CrossSpec{2, {1.0, 1.0}, 0.0}).empty());
  EXPECT_TRUE(lk::cross_blocks(CrossSpec{2, {1.0, 1.0}, -2.0}).empty());
}

TEST(CrossBlocks, Nesting) {
  CrossSpec small{2, {1.0, 1.5}, 4.0};
  CrossSpec big{2, {1.0, 1.5}, 6.5};
  const auto a = lk::cross_blocks(small);
  const auto b = lk::cross_blocks(big);
  std::set<BlockIndex> bs(b.begin(), b.end());
  for (const auto& s : a) EXPECT_TRUE(bs.count(s));
  EXPECT_LT(a.size(), b.size());
}

TEST(ShellY, TruncatedComplement) {
  CrossSpec spec{2, {1.0, 1.0}, 2.0};
  const int caps[] = {2, 2};
  const auto y = lk::shell_Y(spec, caps);
  EXPECT_EQ(y.size(), 6u); // s in [0,2]^2 with s1+s2 >= 2

  CrossSpec zero{2, {1.0, 1.0}, 0.0};
  EXPECT_EQ(lk::shell_Y(zero, caps).size(), 9u); // whole capped box

  CrossSpec high{2, {1.0, 1.0}, 100.0};
  EXPECT_TRUE(lk::shell_Y(high, caps).empty());
}

TEST(ShellKappa, ExactLevels) {
  EXPECT_EQ(lk::shell_kappa(CrossSpec{2, {1.0, 1.0}, 4.0}).size(), 5u);

  const auto k12 = lk::shell_kappa(CrossSpec{2, {1.0, 2.0}, 4.0});
  ASSERT_EQ(k12.size(), 3u);
  EXPECT_EQ(k12[0], (BlockIndex{{0, 2, 0, 0}}));
  EXPECT_EQ(k12[1], (BlockIndex{{2, 1, 0, 0}}));
  EXPECT_EQ(k12[2], (BlockIndex{{4, 0, 0, 0}}));

  // rational gamma scales to integers: 1.5 s1 + s2 = 4 has (0,4) and (2,1)
  const auto kr = lk::shell_kappa(CrossSpec{2, {1.5, 1.0}, 4.0});
  EXPECT_EQ(kr.size(), 2u);

  // unreachable level for an awkward gamma: empty is a report, not an error
  EXPECT_TRUE(lk::shell_kappa(CrossSpec{1, {1.3}, 1.0}).empty());
}

TEST(ShellKappa, SubsetOfShellY) {
  CrossSpec spec{3, {1.0, 2.0, 1.5}, 6.0};
  const auto kappa = lk::shell_kappa(spec);
  ASSERT_FALSE(kappa.empty());
  const int caps[] = {10, 10, 10};
  const auto y = lk::shell_Y(spec, caps);
  std::set<BlockIndex> ys(y.begin(), y.end());
  for (const auto& s : kappa) EXPECT_TRUE(ys.count(s));
}

TEST(Projection, MembershipSplit) {
  CrossSpec spec{2, {1.0, 1.0}, 3.0};
  SpectralFunction g;
  g.dims = 2;
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> freq(-8, 8);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  for (int i = 0; i < 25; ++i) g.coeffs[{freq(rng), freq(rng), 0, 0}] = {amp(rng), amp(rng)};

  const auto proj = lk::project_onto_cross(g, spec);
  lk::detail::DotClassifier cls(spec);
  for (const auto& [k, a] : g.coeffs) {
    const bool inside = cls.classify(lk::block_of(k, 2)) == lk::detail::DotClass::Below;
    if (inside) {
      EXPECT_EQ(proj.coeffs.at(k), a);
    } else {
      EXPECT_FALSE(proj.coeffs.count(k));
    }
  }

  // supported inside -> unchanged; outside -> zero
  SpectralFunction inside_only;
  inside_only.dims = 2;
  inside_only.coeffs[{1, 1, 0, 0}] = {1.0, 0.0}; // block (1,1), dot 2 < 3
  EXPECT_EQ(lk::project_onto_cross(inside_only, spec).coeffs.size(), 1u);

  SpectralFunction outside_only;
  outside_only.dims = 2;
  outside_only.coeffs[{4, 4, 0, 0}] = {1.0, 0.0}; // block (3,3), dot 6 >= 3
  EXPECT_TRUE(lk::project_onto_cross(outside_only, spec).coeffs.empty());
}

TEST(Csv, DeterministicDumps) {
  CrossSpec spec{2, {1.0, 1.0}, 2.0};
  const auto blocks = lk::cross_blocks(spec);
  const auto csv = lk::blocks_to_csv(blocks, 2);
  EXPECT_EQ(csv, "0,0\n0,1\n1,0\n");

  SpectralFunction g;
  g.dims = 1;
  g.coeffs[{-1, 0, 0, 0}] = {0.5, -0.25};
  g.coeffs[{3, 0, 0, 0}] = {1.0, 0.0};
  EXPECT_EQ(lk::spectrum_to_csv(g), "-1,0.5,-0.25\n3,1,0\n");
}
