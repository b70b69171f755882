// Nikol'skii-Besov class functional over dyadic blocks, the Dirichlet block
// polynomials of the block-norm relation, and the extremal families used by
// the two-sided approximation experiments.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "lk/blocknorm.hpp"
#include "lk/norms.hpp"
#include "lk/spectral.hpp"

namespace lk {

/// Class parameters: the source space (p, V^(1), tau^(1)) extended by the
/// smoothness vector r and the block-sequence exponents theta.
struct BesovParams {
  SpaceParams space;
  std::vector<double> r;
  std::vector<double> theta;

  int dims() const { return space.dims(); }

  void validate() const {
    space.validate();
    if (r.size() != space.p.size() || theta.size() != space.p.size())
      throw std::invalid_argument("BesovParams: r, theta must match the space dimension");
    for (double rj : r)
      if (!(rj > 0.0)) throw std::invalid_argument("BesovParams: requires r_j > 0");
    for (double th : theta)
      if (!(th >= 1.0)) throw std::invalid_argument("BesovParams: requires theta_j >= 1");
  }
};

inline double dyadic_weight(const BlockIndex& s, std::span<const double> r) {
  double e = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) e += r[j] * s.s[j];
  return std::exp2(e);
}

/// Class functional ||g||* + || { prod_j 2^{s_j r_j} ||delta_s(g)||* } ||_{l_theta}
/// evaluated through explicit synthesis on the given grid. Membership in the
/// class means the value is <= 1.
inline double besov_functional(const SpectralFunction& g, const BesovParams& bp,
                               const std::vector<std::size_t>& sizes) {
  bp.validate();
  if (g.coeffs.empty()) return 0.0;
  const double full = aniso_lk_norm(synthesize(g, sizes), bp.space);
  std::vector<SeqEntry> entries;
  for (const auto& s : support_blocks(g)) {
    const double bn = aniso_lk_norm(synthesize(dyadic_block(g, s), sizes), bp.space);
    SeqEntry e;
    for (int j = 0; j < g.dims; ++j) e.n[static_cast<std::size_t>(j)] = s.s[static_cast<std::size_t>(j)];
    e.value = dyadic_weight(s, std::span<const double>(bp.r).first(static_cast<std::size_t>(g.dims))) * bn;
    entries.push_back(e);
  }
  return full + mixed_seq_norm(std::move(entries),
                               std::span<const double>(bp.theta).first(static_cast<std::size_t>(g.dims)));
}

/// Functional of a block polynomial through the fast routes: the seminorm
/// blocks are separable (exact product of 1-D norms), the full norm goes
/// through the reduced half-offset pipeline.
struct BlockFunctional {
  double full_norm = 0.0;
  double seminorm = 0.0;
  double value = 0.0;
};

inline BlockFunctional besov_functional_blocks(const BlockPoly& f, const BesovParams& bp,
                                               const BlockNormOptions& opts = {}) {
  bp.validate();
  BlockFunctional out;
  if (f.blocks.empty()) return out;
  out.full_norm = block_poly_aniso_norm(f, bp.space, opts);
  std::vector<SeqEntry> entries;
  entries.reserve(f.blocks.size());
  for (const auto& [s, w] : f.blocks) {
    SeqEntry e;
    for (int j = 0; j < f.dims; ++j) e.n[static_cast<std::size_t>(j)] = s.s[static_cast<std::size_t>(j)];
    e.value = dyadic_weight(s, std::span<const double>(bp.r).first(static_cast<std::size_t>(f.dims))) *
              separable_block_norm(s, w, bp.space);
    entries.push_back(e);
  }
  out.seminorm = mixed_seq_norm(std::move(entries),
                                std::span<const double>(bp.theta).first(static_cast<std::size_t>(f.dims)));
  out.value = out.full_norm + out.seminorm;
  return out;
}

/// All-ones coefficients on rho(s).
inline SpectralFunction dirichlet_block(const BlockIndex& s, int dims) {
  BlockPoly f;
  f.dims = dims;
  f.blocks.push_back({s, 1.0});
  return to_spectral(f);
}

/// Computed-over-predicted ratio of the block-norm relation:
/// ||D_rho(s)||* / prod_j 2^{s_j(1-1/p_j)} V_j(2^{-s_j}).
inline double dirichlet_block_ratio(const BlockIndex& s, const SpaceParams& sp,
                                    std::size_t min_grid = 4096) {
  double predicted = 1.0;
  for (int j = 0; j < sp.dims(); ++j) {
    const auto ju = static_cast<std::size_t>(j);
    predicted *= std::exp2(s.s[ju] * (1.0 - 1.0 / sp.p[ju])) * sp.V[ju].at_dyadic(s.s[ju]);
  }
  return separable_block_norm(s, 1.0, sp, min_grid) / predicted;
}

/// Hypotheses and derived quantities of the two-sided estimate: source class,
/// target space (q, V^(2), tau^(2)) and the cross direction gamma'.
struct TheoremParams {
  BesovParams source;
  SpaceParams target;
  std::vector<double> gamma_prime;

  int dims() const { return source.dims(); }

  /// r_j + 1/q_j - 1/p_j, the per-axis approximation exponents.
  std::vector<double> exponents() const {
    std::vector<double> e(static_cast<std::size_t>(dims()));
    for (int j = 0; j < dims(); ++j) {
      const auto ju = static_cast<std::size_t>(j);
      e[ju] = source.r[ju] + 1.0 / target.p[ju] - 1.0 / source.space.p[ju];
    }
    return e;
  }

  int j0() const {
    const auto e = exponents();
    return static_cast<int>(std::min_element(e.begin(), e.end()) - e.begin());
  }

  /// alpha = min_j (r_j + 1/q_j - 1/p_j).
  double alpha() const { return exponents()[static_cast<std::size_t>(j0())]; }

  std::vector<double> gamma() const {
    auto e = exponents();
    const double a = alpha();
    for (auto& x : e) x /= a;
    return e;
  }

  /// A = { j : gamma_j / gamma'_j == 1 }, nonempty because gamma_{j0} = 1.
  std::vector<int> A() const {
    std::vector<int> out;
    const auto g = gamma();
    for (int j = 0; j < dims(); ++j) {
      const auto ju = static_cast<std::size_t>(j);
      if (std::abs(g[ju] / gamma_prime[ju] - 1.0) <= 1e-9) out.push_back(j);
    }
    return out;
  }

  int j1() const {
    const auto a = A();
    if (a.empty()) throw std::logic_error("TheoremParams: A is empty");
    return a.front();
  }

  void validate() const {
    source.validate();
    target.validate();
    if (target.dims() != source.dims() ||
        static_cast<int>(gamma_prime.size()) != source.dims())
      throw std::invalid_argument("TheoremParams: dimension mismatch");
    for (int j = 0; j < dims(); ++j) {
      const auto ju = static_cast<std::size_t>(j);
      if (!(source.space.p[ju] < target.p[ju]))
        throw std::invalid_argument("TheoremParams: hypothesis violated: 1 < p_j < q_j");
      if (!(source.r[ju] > 1.0 / source.space.p[ju] - 1.0 / target.p[ju]))
        throw std::invalid_argument("TheoremParams: hypothesis violated: r_j > 1/p_j - 1/q_j");
      if (target.tau[ju] == kInf)
        throw std::invalid_argument("TheoremParams: hypothesis violated: tau^(2)_j < inf");
    }
    const auto g = gamma();
    for (int j = 0; j < dims(); ++j) {
      const auto ju = static_cast<std::size_t>(j);
      if (!(gamma_prime[ju] >= 1.0 - 1e-12) || !(gamma_prime[ju] <= g[ju] + 1e-12))
        throw std::invalid_argument("TheoremParams: hypothesis violated: 1 <= gamma'_j <= gamma_j");
    }
  }
};

/// The shell sum f_{1,n}: blocks on { <s^0, gamma> = n } with s^0 supported
/// on A, coefficient weights prod_j 2^{-s_j(r_j+1-1/p_j)} / V^(1)_j(2^{-s_j})
/// and the n^{-sum 1/theta_j} front factor. Unnormalized; the class
/// normalizer is computed separately by the functional.
inline BlockPoly extremal_f1(const TheoremParams& tp, int n) {
  tp.validate();
  if (n < 1) throw std::invalid_argument("extremal_f1: n must be >= 1");
  const auto a_set = tp.A();
  const auto g = tp.gamma();

  CrossSpec reduced;
  reduced.dims = static_cast<int>(a_set.size());
  reduced.n = n;
  for (int j : a_set) reduced.gamma.push_back(g[static_cast<std::size_t>(j)]);
  const auto kappa = shell_kappa(reduced);
  if (kappa.empty()) throw std::runtime_error("extremal_f1: empty kappa set for the given n");

  double front = 0.0; // sum over A \ {j1} of 1/theta_j
  for (std::size_t i = 1; i < a_set.size(); ++i) {
    const double th = tp.source.theta[static_cast<std::size_t>(a_set[i])];
    front += th == kInf ? 0.0 : 1.0 / th;
  }
  const double prefactor = std::pow(static_cast<double>(n), -front);

  BlockPoly f;
  f.dims = tp.dims();
  for (const auto& st : kappa) {
    BlockIndex s{};
    for (std::size_t i = 0; i < a_set.size(); ++i)
      s.s[static_cast<std::size_t>(a_set[i])] = st.s[i];
    double w = prefactor;
    for (int j = 0; j < tp.dims(); ++j) {
      const auto ju = static_cast<std::size_t>(j);
      const double expo = tp.source.r[ju] + 1.0 - 1.0 / tp.source.space.p[ju];
      w *= std::exp2(-expo * s.s[ju]) / tp.source.space.V[ju].at_dyadic(s.s[ju]);
    }
    f.blocks.push_back({s, w});
  }
  f.normalize();
  return f;
}

/// The single-shell function f_{2,n} at s^0 with <s^0, gamma'> >= n.
inline BlockPoly extremal_f2(const TheoremParams& tp, int n, const BlockIndex& s0) {
  tp.validate();
  CrossSpec spec;
  spec.dims = tp.dims();
  spec.gamma = tp.gamma_prime;
  spec.n = n;
  detail::DotClassifier cls(spec);
  if (cls.classify(s0) == detail::DotClass::Below)
    throw std::invalid_argument("extremal_f2: block lies inside the cross");
  double w = 1.0;
  for (int j = 0; j < tp.dims(); ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const double expo = tp.source.r[ju] + 1.0 - 1.0 / tp.source.space.p[ju];
    w *= std::exp2(-expo * s0.s[ju]) / tp.source.space.V[ju].at_dyadic(s0.s[ju]);
  }
  BlockPoly f;
  f.dims = tp.dims();
  f.blocks.push_back({s0, w});
  return f;
}

} // namespace lk
