// Norm evaluation for block polynomials: trigonometric polynomials whose
// coefficients are constant on each dyadic shell rho(s). All extremal
// constructions have this shape, which admits two fast routes:
//
//  * a single shell factorizes as w * prod_j D_{s_j}(x_j), so its iterated
//    rearrangement is the outer product of 1-D rearrangements and the
//    anisotropic norm is an exact product of 1-D norms;
//  * a sum of shells is even in every variable, so on a half-offset grid
//    x_k = 2*pi*(k+1/2)/N the samples pair up two by two per axis and the
//    full N^m rearrangement pipeline reduces to the (N/2)^m unique values
//    with doubled step weights. The reduction reproduces the full-grid
//    quadrature exactly.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lk/norms.hpp"
#include "lk/spectral.hpp"

namespace lk {

/// A real-weighted sum of all-ones shell polynomials:
/// f(x) = sum_b weight_b * sum_{k in rho(s_b)} e^{i<k,x>}.
struct BlockPoly {
  int dims = 1;
  std::vector<std::pair<BlockIndex, double>> blocks; // sorted by shell, unique

  void normalize() {
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i + 1 < blocks.size(); ++i)
      if (blocks[i].first == blocks[i + 1].first)
        throw std::invalid_argument("BlockPoly: duplicate shell");
  }

  int max_shell(int axis) const {
    int smax = 0;
    for (const auto& [s, w] : blocks) smax = std::max(smax, s.s[static_cast<std::size_t>(axis)]);
    return smax;
  }

  BlockPoly scaled(double c) const {
    BlockPoly out = *this;
    for (auto& [s, w] : out.blocks) w *= c;
    return out;
  }
};

inline SpectralFunction to_spectral(const BlockPoly& f) {
  SpectralFunction g;
  g.dims = f.dims;
  for (const auto& [s, w] : f.blocks)
    for (const auto& k : rho_set(s, f.dims)) g.coeffs[k] = w;
  return g;
}

/// 1-D shell kernel D_s(x) = sum_{[2^{s-1}] <= |k| < 2^s} e^{ikx}; real and
/// even. Closed form via the Dirichlet difference; D_0 == 1.
inline double dirichlet_shell(int s, double x) {
  if (s == 0) return 1.0;
  const double half = std::sin(0.5 * x);
  const double a = std::ldexp(1.0, s - 1);
  const double b = std::ldexp(1.0, s) - 1.0;
  if (std::abs(half) < 1e-12) return 2.0 * (b - a + 1.0); // x ~ 0 mod 2*pi
  return (std::sin((b + 0.5) * x) - std::sin((a - 0.5) * x)) / half;
}

namespace detail {

/// Kernel table for one axis on the half-offset grid: tab[s][j] =
/// D_s(2*pi*(j+1/2)/N), j = 0..N/2-1.
inline std::vector<std::vector<double>> shell_table(int smax, std::size_t N) {
  std::vector<std::vector<double>> tab(static_cast<std::size_t>(smax) + 1);
  const std::size_t half = N / 2;
  for (int s = 0; s <= smax; ++s) {
    tab[static_cast<std::size_t>(s)].resize(half);
    for (std::size_t j = 0; j < half; ++j) {
      const double x = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) /
                       static_cast<double>(N);
      tab[static_cast<std::size_t>(s)][j] = dirichlet_shell(s, x);
    }
  }
  return tab;
}

/// Paired quadrature weights for one axis: the full grid has N equal steps
/// with midpoints t_i = (i+1/2)/N; the reduced value at slot j stands for
/// steps 2j and 2j+1.
struct AxisWeights {
  std::vector<double> sum; // finite tau: [V^tau t^{tau/p-1}](t_2j)+...(t_2j+1), /N folded in
  std::vector<double> sup; // tau = inf: max of V(t) t^{1/p} over the two sub-midpoints
  double tau = 2.0;
};

inline AxisWeights axis_weights(std::size_t N, double p, double tau, const WeightV& V) {
  AxisWeights w;
  w.tau = tau;
  const std::size_t half = N / 2;
  const double invN = 1.0 / static_cast<double>(N);
  if (tau == kInf) {
    w.sup.resize(half);
    for (std::size_t j = 0; j < half; ++j) {
      const double t0 = (2.0 * static_cast<double>(j) + 0.5) * invN;
      const double t1 = (2.0 * static_cast<double>(j) + 1.5) * invN;
      w.sup[j] = std::max(V(t0) * std::pow(t0, 1.0 / p), V(t1) * std::pow(t1, 1.0 / p));
    }
  } else {
    w.sum.resize(half);
    const double wexp = tau / p - 1.0;
    for (std::size_t j = 0; j < half; ++j) {
      const double t0 = (2.0 * static_cast<double>(j) + 0.5) * invN;
      const double t1 = (2.0 * static_cast<double>(j) + 1.5) * invN;
      w.sum[j] = (std::pow(V(t0), tau) * std::pow(t0, wexp) +
                  std::pow(V(t1), tau) * std::pow(t1, wexp)) * invN;
    }
  }
  return w;
}

inline double pow_tau(double x, double tau) {
  if (tau == 2.0) return x * x;
  if (tau == 1.0) return x;
  return std::pow(x, tau);
}

} // namespace detail

struct BlockNormOptions {
  int oversample_log2 = 0;                  // grid N_j = 2^{smax_j+1+oversample}
  std::size_t max_elements = 320'000'000;   // reduced-matrix size guard
};

/// Anisotropic Lorentz-Karamata norm of a block polynomial via the reduced
/// half-offset pipeline (m <= 2). Grids are the alias-free minimum
/// 2^{smax_j+1} per axis unless oversampled.
inline double block_poly_aniso_norm(BlockPoly f, const SpaceParams& sp,
                                    const BlockNormOptions& opts = {}) {
  sp.validate();
  if (sp.dims() != f.dims)
    throw std::invalid_argument("block_poly_aniso_norm: parameter/dims mismatch");
  if (f.blocks.empty()) return 0.0;
  f.normalize();

  if (f.dims == 1) {
    const int smax = f.max_shell(0);
    const std::size_t N = std::size_t{1} << (smax + 1 + opts.oversample_log2);
    const std::size_t half = N / 2;
    if (half > opts.max_elements)
      throw std::runtime_error("block_poly_aniso_norm: grid exceeds the element budget");
    const auto tab = detail::shell_table(smax, N);
    std::vector<double> u(half, 0.0);
    for (const auto& [s, w] : f.blocks) {
      const auto& row = tab[static_cast<std::size_t>(s.s[0])];
      for (std::size_t j = 0; j < half; ++j) u[j] += w * row[j];
    }
    for (auto& x : u) x = std::abs(x);
    std::sort(u.begin(), u.end(), std::greater<double>());
    const auto w1 = detail::axis_weights(N, sp.p[0], sp.tau[0], sp.V[0]);
    if (sp.tau[0] == kInf) {
      double best = 0.0;
      for (std::size_t j = 0; j < half; ++j) best = std::max(best, u[j] * w1.sup[j]);
      return best;
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < half; ++j) acc += detail::pow_tau(u[j], sp.tau[0]) * w1.sum[j];
    return std::pow(acc, 1.0 / sp.tau[0]);
  }

  if (f.dims != 2)
    throw std::invalid_argument("block_poly_aniso_norm: reduced pipeline supports m <= 2; "
                                "materialize through synthesize() for higher dims");

  const int smax1 = f.max_shell(0), smax2 = f.max_shell(1);
  const std::size_t N1 = std::size_t{1} << (smax1 + 1 + opts.oversample_log2);
  const std::size_t N2 = std::size_t{1} << (smax2 + 1 + opts.oversample_log2);
  const std::size_t half1 = N1 / 2, half2 = N2 / 2;
  if (half1 * half2 > opts.max_elements)
    throw std::runtime_error("block_poly_aniso_norm: grid exceeds the element budget");

  const auto tab1 = detail::shell_table(smax1, N1);
  const auto tab2 = detail::shell_table(smax2, N2);

  // distinct axis-1 shells present, with their (s2, weight) partners
  std::vector<int> s1_list;
  for (const auto& [s, w] : f.blocks)
    if (s1_list.empty() || s1_list.back() != s.s[0]) s1_list.push_back(s.s[0]);

  // row pass: synthesize |f| on row r, sort descending, store as float
  std::vector<float> mat(half1 * half2);
  std::vector<double> coef(s1_list.size());
  std::vector<double> row(half1);
  for (std::size_t r = 0; r < half2; ++r) {
    std::fill(coef.begin(), coef.end(), 0.0);
    for (const auto& [s, w] : f.blocks) {
      const auto it = std::lower_bound(s1_list.begin(), s1_list.end(), s.s[0]);
      coef[static_cast<std::size_t>(it - s1_list.begin())] +=
          w * tab2[static_cast<std::size_t>(s.s[1])][r];
    }
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t si = 0; si < s1_list.size(); ++si) {
      const double c = coef[si];
      if (c == 0.0) continue;
      const auto& krow = tab1[static_cast<std::size_t>(s1_list[si])];
      for (std::size_t j = 0; j < half1; ++j) row[j] += c * krow[j];
    }
    float* out = mat.data() + r * half1;
    for (std::size_t j = 0; j < half1; ++j) out[j] = static_cast<float>(std::abs(row[j]));
    std::sort(out, out + half1, std::greater<float>());
  }

  const auto w1 = detail::axis_weights(N1, sp.p[0], sp.tau[0], sp.V[0]);
  const auto w2 = detail::axis_weights(N2, sp.p[1], sp.tau[1], sp.V[1]);
  const bool sup1 = sp.tau[0] == kInf;

  // column pass in tiles: sort each t1-rank column over the rows, then fold
  // the axis-1 quadrature into Acc[r] in ascending column order
  std::vector<double> acc(half2, 0.0);
  constexpr std::size_t kTile = 128;
  std::vector<float> tile(kTile * half2);
  std::vector<float> col(half2);
  for (std::size_t j0 = 0; j0 < half1; j0 += kTile) {
    const std::size_t jw = std::min(kTile, half1 - j0);
    for (std::size_t r = 0; r < half2; ++r) {
      const float* src = mat.data() + r * half1 + j0;
      for (std::size_t jj = 0; jj < jw; ++jj) tile[jj * half2 + r] = src[jj];
    }
    for (std::size_t jj = 0; jj < jw; ++jj) {
      float* c = tile.data() + jj * half2;
      std::sort(c, c + half2, std::greater<float>());
      const std::size_t j = j0 + jj;
      if (sup1) {
        const double w = w1.sup[j];
        for (std::size_t r = 0; r < half2; ++r)
          acc[r] = std::max(acc[r], static_cast<double>(c[r]) * w);
      } else {
        const double w = w1.sum[j];
        const double tau1 = sp.tau[0];
        for (std::size_t r = 0; r < half2; ++r)
          acc[r] += detail::pow_tau(static_cast<double>(c[r]), tau1) * w;
      }
    }
  }

  // outer level: acc[r] is the axis-1 integral (or sup) at t2-rank r
  const double tau1 = sp.tau[0], tau2 = sp.tau[1];
  if (tau2 == kInf) {
    double best = 0.0;
    for (std::size_t r = 0; r < half2; ++r) {
      const double inner = sup1 ? acc[r] : std::pow(acc[r], 1.0 / tau1);
      best = std::max(best, inner * w2.sup[r]);
    }
    return best;
  }
  double total = 0.0;
  for (std::size_t r = 0; r < half2; ++r) {
    const double powed = sup1 ? detail::pow_tau(acc[r], tau2) : std::pow(acc[r], tau2 / tau1);
    total += powed * w2.sum[r];
  }
  return std::pow(total, 1.0 / tau2);
}

/// Exact product route for a single shell: the norm of w * prod_j D_{s_j}
/// equals |w| * prod_j ||D_{s_j}||, each factor a 1-D Lorentz-Karamata norm.
/// 1-D grids are at least min_grid and at least 4x the shell bandwidth.
inline double separable_block_norm(const BlockIndex& s, double weight, const SpaceParams& sp,
                                   std::size_t min_grid = 4096) {
  sp.validate();
  double out = std::abs(weight);
  for (int j = 0; j < sp.dims(); ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const int sj = s.s[ju];
    std::size_t N = std::size_t{1} << (sj + 2);
    while (N < min_grid) N <<= 1;
    const std::size_t half = N / 2;
    std::vector<double> u(half);
    for (std::size_t i = 0; i < half; ++i) {
      const double x = 2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) /
                       static_cast<double>(N);
      u[i] = std::abs(dirichlet_shell(sj, x));
    }
    std::sort(u.begin(), u.end(), std::greater<double>());
    const auto w = detail::axis_weights(N, sp.p[ju], sp.tau[ju], sp.V[ju]);
    double factor = 0.0;
    if (sp.tau[ju] == kInf) {
      for (std::size_t i = 0; i < half; ++i) factor = std::max(factor, u[i] * w.sup[i]);
    } else {
      double a = 0.0;
      for (std::size_t i = 0; i < half; ++i) a += detail::pow_tau(u[i], sp.tau[ju]) * w.sum[i];
      factor = std::pow(a, 1.0 / sp.tau[ju]);
    }
    out *= factor;
  }
  return out;
}

} // namespace lk
