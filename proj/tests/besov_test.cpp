#include "lk/besov.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "lk/blocknorm.hpp"
#include "lk/norms.hpp"

using lk::BesovParams;
using lk::BlockIndex;
using lk::BlockPoly;
using lk::CrossSpec;
using lk::GridFunction;
using lk::kInf;
using lk::SpaceParams;
using lk::SpectralFunction;
using lk::SVFunction;
using lk::TheoremParams;
using lk::WeightV;

namespace {

BesovParams simple_besov(int m, double p, double tau, double r, double theta) {
  BesovParams bp;
  bp.space = SpaceParams::isotropic(m, p, tau);
  bp.r.assign(static_cast<std::size_t>(m), r);
  bp.theta.assign(static_cast<std::size_t>(m), theta);
  return bp;
}

TheoremParams simple_theorem(int m, double theta) {
  TheoremParams tp;
  tp.source.space = SpaceParams::isotropic(m, 2.0, 2.0);
  tp.source.r.assign(static_cast<std::size_t>(m), 1.0);
  tp.source.theta.assign(static_cast<std::size_t>(m), theta);
  tp.target = SpaceParams::isotropic(m, 4.0, 2.0);
  tp.gamma_prime.assign(static_cast<std::size_t>(m), 1.0);
  return tp;
}

/// Samples a block polynomial on the half-offset grid so the plain
/// GridFunction pipeline sees exactly the values the reduced pipeline uses.
GridFunction sample_blocks_shifted(const BlockPoly& f, const std::vector<std::size_t>& sizes) {
  GridFunction g = GridFunction::zeros(sizes);
  std::array<std::size_t, lk::kMaxDims> coord{};
  for (std::size_t idx = 0; idx < g.total(); ++idx) {
    double acc = 0.0;
    for (const auto& [s, w] : f.blocks) {
      double prod = w;
      for (int j = 0; j < f.dims; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        const double x = 2.0 * std::numbers::pi * (static_cast<double>(coord[ju]) + 0.5) /
                         static_cast<double>(sizes[ju]);
        prod *= lk::dirichlet_shell(s.s[ju], x);
      }
      acc += prod;
    }
    g.values[idx] = acc;
    for (int j = 0; j < f.dims; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      if (++coord[ju] < sizes[ju]) break;
      coord[ju] = 0;
    }
  }
  return g;
}

} // namespace

TEST(DirichletShell, ClosedFormMatchesDirectSum) {
  for (int s : {0, 1, 2, 3, 5}) {
    for (double x : {0.1, 0.7, 2.0, 3.9, 6.0}) {
      double direct = s == 0 ? 1.0 : 0.0;
      if (s > 0)
        for (int k = 1 << (s - 1); k < (1 << s); ++k) direct += 2.0 * std::cos(k * x);
      EXPECT_NEAR(lk::dirichlet_shell(s, x), direct, 1e-10) << "s=" << s << " x=" << x;
    }
    EXPECT_NEAR(lk::dirichlet_shell(s, 0.0),
                static_cast<double>(lk::rho_size(BlockIndex{{s, 0, 0, 0}}, 1)), 1e-12);
  }
}

TEST(BlockNorm, ReducedPipelineMatchesGridPipeline) {
  // the half-offset reduction must reproduce the plain pipeline on the same
  // samples; only float storage separates them
  BlockPoly f;
  f.dims = 2;
  f.blocks = {{BlockIndex{{3, 0, 0, 0}}, 1.0},
              {BlockIndex{{2, 1, 0, 0}}, -0.5},
              {BlockIndex{{0, 3, 0, 0}}, 0.25}};
  SpaceParams sp = SpaceParams::isotropic(2, 2.0, 2.0, WeightV(SVFunction::parse("l1^0.5")));
  sp.p[1] = 1.5;
  sp.tau[1] = 3.0;

  const auto g = sample_blocks_shifted(f, {16, 16});
  const double reference = aniso_lk_norm(g, sp);
  const double reduced = block_poly_aniso_norm(f, sp);
  EXPECT_NEAR(reduced, reference, 1e-5 * reference);

  // sup level on axis 2
  sp.tau[1] = kInf;
  EXPECT_NEAR(block_poly_aniso_norm(f, sp), aniso_lk_norm(g, sp), 1e-5 * aniso_lk_norm(g, sp));
}

TEST(BlockNorm, OneDimReducedMatchesProfileRoute) {
  BlockPoly f;
  f.dims = 1;
  f.blocks = {{BlockIndex{{2, 0, 0, 0}}, 2.0}, {BlockIndex{{4, 0, 0, 0}}, -1.0}};
  SpaceParams sp = SpaceParams::isotropic(1, 2.5, 1.5, WeightV(SVFunction::parse("l1")));
  const auto g = sample_blocks_shifted(f, {32});
  const double reference = lk_norm_1d(lk::rearrange_1d(g.values), sp.p[0], sp.tau[0], sp.V[0]);
  EXPECT_NEAR(block_poly_aniso_norm(f, sp), reference, 1e-12 * reference);
}

TEST(BlockNorm, SeparableProductTheorem) {
  // iterated rearrangement of a separable function is the outer product of
  // the 1-D rearrangements, so the norm factorizes exactly
  BlockPoly f;
  f.dims = 2;
  f.blocks = {{BlockIndex{{2, 3, 0, 0}}, 0.75}};
  SpaceParams sp = SpaceParams::isotropic(2, 2.0, 2.0, WeightV(SVFunction::parse("l1")));
  sp.p[1] = 3.0;
  sp.tau[0] = 1.5;

  const std::vector<std::size_t> sizes{16, 32}; // 2^{s_j+2} each
  const auto g = sample_blocks_shifted(f, sizes);
  const double joint = aniso_lk_norm(g, sp);

  double product = 0.75;
  for (int j = 0; j < 2; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    std::vector<std::complex<double>> fiber(sizes[ju]);
    for (std::size_t i = 0; i < sizes[ju]; ++i) {
      const double x = 2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) /
                       static_cast<double>(sizes[ju]);
      fiber[i] = lk::dirichlet_shell(f.blocks[0].first.s[ju], x);
    }
    product *= lk_norm_1d(lk::rearrange_1d(fiber), sp.p[ju], sp.tau[ju], sp.V[ju]);
  }
  EXPECT_NEAR(joint, product, 1e-12 * product);

  // separable_block_norm at the same resolution agrees with both
  EXPECT_NEAR(lk::separable_block_norm(f.blocks[0].first, 0.75, sp, 16), joint, 1e-12 * joint);
}

TEST(DirichletBlock, SpecValues) {
  // s = 0: a single coefficient at the origin
  const auto origin = lk::dirichlet_block(BlockIndex{{0, 0, 0, 0}}, 2);
  ASSERT_EQ(origin.coeffs.size(), 1u);
  EXPECT_EQ(origin.coeffs.begin()->second, std::complex<double>(1.0, 0.0));

  // m=1, s=2, p=tau=2, V==1: Parseval gives norm 2, predicted 2^{s(1-1/p)}=2
  SpaceParams sp1 = SpaceParams::isotropic(1, 2.0, 2.0);
  EXPECT_NEAR(lk::separable_block_norm(BlockIndex{{2, 0, 0, 0}}, 1.0, sp1), 2.0, 1e-9);
  EXPECT_NEAR(lk::dirichlet_block_ratio(BlockIndex{{2, 0, 0, 0}}, sp1), 1.0, 1e-9);

  // m=2, s=(1,1): 4 unit coefficients, norm 2 = 2^{1/2} * 2^{1/2}
  SpaceParams sp2 = SpaceParams::isotropic(2, 2.0, 2.0);
  EXPECT_NEAR(lk::separable_block_norm(BlockIndex{{1, 1, 0, 0}}, 1.0, sp2), 2.0, 1e-9);
  EXPECT_NEAR(lk::dirichlet_block_ratio(BlockIndex{{1, 1, 0, 0}}, sp2), 1.0, 1e-9);
}

TEST(BesovFunctional, ZeroAndHomogeneity) {
  const auto bp = simple_besov(1, 2.0, 2.0, 1.0, 2.0);
  SpectralFunction zero;
  zero.dims = 1;
  EXPECT_DOUBLE_EQ(lk::besov_functional(zero, bp, {16}), 0.0);

  SpectralFunction g;
  g.dims = 1;
  g.coeffs[{1, 0, 0, 0}] = {1.0, 0.5};
  g.coeffs[{5, 0, 0, 0}] = {-0.25, 0.0};
  const double base = lk::besov_functional(g, bp, {32});
  const double scaled = lk::besov_functional(g.scaled(3.5), bp, {32});
  EXPECT_NEAR(scaled, 3.5 * base, 1e-12 * scaled);
}

TEST(BesovFunctional, SingleBlockCollapse) {
  // one block: functional = ||g||* (1 + prod 2^{s_j r_j}) for any theta
  const BlockIndex s{{2, 1, 0, 0}};
  const auto g = lk::dirichlet_block(s, 2);
  for (double theta : {1.0, 2.0, kInf}) {
    const auto bp = simple_besov(2, 2.0, 2.0, 0.75, theta);
    const double func = lk::besov_functional(g, bp, {16, 16});
    const double norm = aniso_lk_norm(lk::synthesize(g, {16, 16}), bp.space);
    const double weight = std::exp2(0.75 * (2 + 1));
    EXPECT_NEAR(func, norm * (1.0 + weight), 1e-12 * func) << "theta=" << theta;
  }
}

TEST(BesovFunctional, BlockRouteTracksGeneralRoute) {
  // the two routes sample differently (plain vs half-offset grids), so they
  // agree only up to quadrature resolution
  const auto tp = simple_theorem(2, kInf);
  const BlockPoly f1 = lk::extremal_f1(tp, 3);
  lk::BlockNormOptions opts;
  opts.oversample_log2 = 2;
  const double fast = lk::besov_functional_blocks(f1, tp.source, opts).value;
  const double general = lk::besov_functional(lk::to_spectral(f1), tp.source, {64, 64});
  EXPECT_NEAR(fast, general, 0.05 * general);
}

TEST(TheoremParamsCheck, DerivedQuantities) {
  TheoremParams tp = simple_theorem(2, kInf);
  tp.validate();
  EXPECT_EQ(tp.j0(), 0);
  EXPECT_NEAR(tp.alpha(), 1.0 + 0.25 - 0.5, 1e-15);
  EXPECT_EQ(tp.gamma(), (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(tp.A(), (std::vector<int>{0, 1}));
  EXPECT_EQ(tp.j1(), 0);

  // anisotropic smoothness: gamma reflects the per-axis exponents
  tp.source.r = {1.0, 2.0};
  EXPECT_EQ(tp.j0(), 0);
  const auto g = tp.gamma();
  EXPECT_NEAR(g[0], 1.0, 1e-15);
  EXPECT_NEAR(g[1], (2.0 + 0.25 - 0.5) / 0.75, 1e-15);
  EXPECT_EQ(tp.A(), (std::vector<int>{0}));
}

TEST(TheoremParamsCheck, HypothesisViolations) {
  TheoremParams tp = simple_theorem(2, kInf);
  tp.target.p = {2.0, 4.0}; // p_1 == q_1
  try {
    tp.validate();
    FAIL() << "expected hypothesis violation";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("1 < p_j < q_j"), std::string::npos);
  }

  tp = simple_theorem(2, kInf);
  tp.source.r = {0.2, 1.0}; // r_1 <= 1/p_1 - 1/q_1 = 0.25
  EXPECT_THROW(tp.validate(), std::invalid_argument);

  tp = simple_theorem(2, kInf);
  tp.gamma_prime = {0.5, 1.0}; // below 1
  EXPECT_THROW(tp.validate(), std::invalid_argument);
  tp.gamma_prime = {1.5, 1.0}; // above gamma_1 = 1
  EXPECT_THROW(tp.validate(), std::invalid_argument);
}

TEST(ExtremalF1, ConstructionOracle) {
  const auto tp = simple_theorem(2, 2.0);
  const BlockPoly f1 = lk::extremal_f1(tp, 3);
  ASSERT_EQ(f1.blocks.size(), 4u);
  // blocks are exactly the level set s1 + s2 = 3
  for (const auto& [s, w] : f1.blocks) EXPECT_EQ(s.s[0] + s.s[1], 3);

  // stated weights: n^{-1/theta_2} prod_j 2^{-s_j (r_j + 1 - 1/p_j)}
  const double prefactor = std::pow(3.0, -0.5);
  for (const auto& [s, w] : f1.blocks) EXPECT_NEAR(w, prefactor * std::exp2(-1.5 * 3.0), 1e-15);

  // coefficients constant within a block
  const auto g = lk::to_spectral(f1);
  for (const auto& [k, a] : g.coeffs) {
    EXPECT_NEAR(a.real(), prefactor * std::exp2(-4.5), 1e-15);
    EXPECT_DOUBLE_EQ(a.imag(), 0.0);
  }

  // spectrum disjoint from the cross: projection keeps nothing
  CrossSpec spec{2, tp.gamma_prime, 3.0};
  EXPECT_TRUE(lk::project_onto_cross(g, spec).coeffs.empty());

  EXPECT_THROW(lk::extremal_f1(tp, 0), std::invalid_argument);
}

TEST(ExtremalF1, RestrictedSupportOutsideA) {
  // a strictly larger exponent on axis 2 pushes it out of A; s^0 is zero there
  TheoremParams tp = simple_theorem(2, 2.0);
  tp.source.r = {1.0, 2.0};
  tp.gamma_prime = {1.0, 1.0};
  const BlockPoly f1 = lk::extremal_f1(tp, 4);
  ASSERT_EQ(f1.blocks.size(), 1u);
  EXPECT_EQ(f1.blocks[0].first.s[0], 4);
  EXPECT_EQ(f1.blocks[0].first.s[1], 0);
}

TEST(ExtremalF1, NormalizedMemberHasUnitFunctional) {
  const auto tp = simple_theorem(2, kInf);
  const BlockPoly f1 = lk::extremal_f1(tp, 4);
  const double c1 = lk::besov_functional_blocks(f1, tp.source).value;
  const BlockPoly normalized = f1.scaled(1.0 / c1);
  const double unit = lk::besov_functional_blocks(normalized, tp.source).value;
  EXPECT_NEAR(unit, 1.0, 1e-12);
}

TEST(ExtremalF2, SingleBlockProperties) {
  const auto tp = simple_theorem(2, 2.0);
  const BlockIndex s0{{2, 2, 0, 0}};
  const BlockPoly f2 = lk::extremal_f2(tp, 4, s0); // <s0, gamma'> = 4 >= 4
  ASSERT_EQ(f2.blocks.size(), 1u);
  EXPECT_NEAR(f2.blocks[0].second, std::exp2(-1.5 * 4.0), 1e-15);

  // projection error equals its own norm: the cross keeps nothing of it
  CrossSpec spec{2, tp.gamma_prime, 4.0};
  EXPECT_TRUE(lk::project_onto_cross(lk::to_spectral(f2), spec).coeffs.empty());

  // functional collapses to the closed single-term form
  const auto func = lk::besov_functional_blocks(f2, tp.source);
  const double norm = lk::separable_block_norm(s0, f2.blocks[0].second, tp.source.space);
  EXPECT_NEAR(func.value, norm * (1.0 + std::exp2(4.0)), 1e-9 * func.value);

  // a block inside the cross is rejected
  EXPECT_THROW(lk::extremal_f2(tp, 4, BlockIndex{{0, 0, 0, 0}}), std::invalid_argument);
}
