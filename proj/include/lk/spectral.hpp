// Fourier analysis of grid functions and the frequency-index combinatorics:
// dyadic shells rho(s), blocks delta_s(f), the stepped hyperbolic cross
// Q_n^gamma and its complement/level sets Y^m and kappa^m.
#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lk/grid.hpp"

namespace lk {

using FreqIndex = std::array<int, kMaxDims>;  // zero-padded beyond dims

/// Sparse spectrum: finite map from frequency multi-indices to complex
/// Fourier coefficients.
struct SpectralFunction {
  int dims = 1;
  std::map<FreqIndex, std::complex<double>> coeffs;

  std::vector<std::size_t> bandwidth() const {
    std::vector<std::size_t> bw(static_cast<std::size_t>(dims), 0);
    for (const auto& [k, a] : coeffs)
      for (int j = 0; j < dims; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        bw[ju] = std::max(bw[ju], static_cast<std::size_t>(std::abs(k[ju])));
      }
    return bw;
  }

  SpectralFunction& add(const FreqIndex& k, std::complex<double> a) {
    coeffs[k] += a;
    return *this;
  }

  SpectralFunction scaled(double c) const {
    SpectralFunction out = *this;
    for (auto& [k, a] : out.coeffs) a *= c;
    return out;
  }
};

namespace detail {

// In-place radix-2 complex FFT, sign = -1 forward / +1 inverse (unscaled).
inline void fft_pow2(std::span<std::complex<double>> a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wl{std::cos(ang), std::sin(ang)};
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w{1.0, 0.0};
      for (std::size_t k = 0; k < len / 2; ++k) {
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// O(N^2) fallback for non power-of-two sizes (only small grids use it).
inline void dft_naive(std::span<std::complex<double>> a, int sign) {
  const std::size_t n = a.size();
  std::vector<std::complex<double>> out(n, {0.0, 0.0});
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t k = 0; k < n; ++k) {
      const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(b) *
                         static_cast<double>(k) / static_cast<double>(n);
      out[b] += a[k] * std::complex<double>{std::cos(ang), std::sin(ang)};
    }
  std::copy(out.begin(), out.end(), a.begin());
}

inline void transform_axis(GridFunction& f, int axis, int sign) {
  const auto ju = static_cast<std::size_t>(axis - 1);
  std::size_t stride = 1;
  for (std::size_t i = 0; i < ju; ++i) stride *= f.sizes[i];
  const std::size_t len = f.sizes[ju];
  const std::size_t block = stride * len;
  const std::size_t outer = f.total() / block;
  std::vector<std::complex<double>> fiber(len);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < stride; ++i) {
      const std::size_t base = o * block + i;
      for (std::size_t k = 0; k < len; ++k) fiber[k] = f.values[base + k * stride];
      if (std::has_single_bit(len))
        fft_pow2(fiber, sign);
      else
        dft_naive(fiber, sign);
      for (std::size_t k = 0; k < len; ++k) f.values[base + k * stride] = fiber[k];
    }
}

} // namespace detail

/// Fourier coefficients a_k = (1/prod N_j) sum f(x) e^{-i<k,x>}, frequencies
/// mapped to the centered range (-N_j/2, N_j/2]. Exact for trigonometric
/// polynomials below Nyquist. Coefficients below 1e-13 * max|a| are dropped.
inline SpectralFunction analyze(const GridFunction& f) {
  GridFunction work = f;
  for (int axis = 1; axis <= f.dims; ++axis) detail::transform_axis(work, axis, -1);
  const double scale = 1.0 / static_cast<double>(f.total());

  double maxabs = 0.0;
  for (const auto& z : work.values) maxabs = std::max(maxabs, std::abs(z));
  const double prune = 1e-13 * maxabs * scale;

  SpectralFunction g;
  g.dims = f.dims;
  std::array<std::size_t, kMaxDims> coord{};
  for (std::size_t idx = 0; idx < work.total(); ++idx) {
    const std::complex<double> a = work.values[idx] * scale;
    if (std::abs(a) > prune) {
      FreqIndex k{};
      for (int j = 0; j < f.dims; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        const auto N = static_cast<std::ptrdiff_t>(f.sizes[ju]);
        const auto b = static_cast<std::ptrdiff_t>(coord[ju]);
        k[ju] = static_cast<int>(2 * b > N ? b - N : b);
      }
      g.coeffs[k] = a;
    }
    for (int j = 0; j < f.dims; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      if (++coord[ju] < f.sizes[ju]) break;
      coord[ju] = 0;
    }
  }
  return g;
}

/// Pointwise sum a_k e^{i<k,x>} on the given grid. Requires
/// N_j >= 2*bandwidth_j + 1 so analyze(synthesize(g)) == g.
inline GridFunction synthesize(const SpectralFunction& g, const std::vector<std::size_t>& sizes) {
  if (static_cast<int>(sizes.size()) != g.dims)
    throw std::invalid_argument("synthesize: sizes/dims mismatch");
  const auto bw = g.bandwidth();
  for (int j = 0; j < g.dims; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    if (sizes[ju] < 2 * bw[ju] + 1)
      throw std::invalid_argument("synthesize: grid undersampled for the spectrum bandwidth");
  }
  GridFunction f = GridFunction::zeros(sizes);
  for (const auto& [k, a] : g.coeffs) {
    std::array<std::size_t, kMaxDims> coord{};
    for (int j = 0; j < g.dims; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      const auto N = static_cast<std::ptrdiff_t>(sizes[ju]);
      coord[ju] = static_cast<std::size_t>(k[ju] >= 0 ? k[ju] : k[ju] + N);
    }
    f.values[f.index(std::span<const std::size_t>(coord.data(), sizes.size()))] += a;
  }
  for (int axis = 1; axis <= g.dims; ++axis) detail::transform_axis(f, axis, +1);
  return f;
}

// --- dyadic shells and crosses ---------------------------------------------

/// Multi-index s in Z_+^m labelling the dyadic shell rho(s).
struct BlockIndex {
  std::array<int, kMaxDims> s{};
  friend auto operator<=>(const BlockIndex&, const BlockIndex&) = default;
};

/// Shell membership per axis: k lies in the s-th 1-D shell iff
/// [2^{s-1}] <= |k| < 2^s; s = 0 holds exactly k = 0.
inline int shell_of(int k) {
  const unsigned a = static_cast<unsigned>(std::abs(k));
  return a == 0 ? 0 : std::bit_width(a);
}

inline BlockIndex block_of(const FreqIndex& k, int dims) {
  BlockIndex s;
  for (int j = 0; j < dims; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    s.s[ju] = shell_of(k[ju]);
  }
  return s;
}

/// rho(s) = { k in Z^m : [2^{s_j-1}] <= |k_j| < 2^{s_j} }, enumerated with
/// axis 1 most significant, ascending k per axis.
inline std::vector<FreqIndex> rho_set(const BlockIndex& s, int dims) {
  std::vector<std::vector<int>> axis_vals(static_cast<std::size_t>(dims));
  for (int j = 0; j < dims; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const int sj = s.s[ju];
    if (sj < 0) throw std::invalid_argument("rho_set: shell index must be >= 0");
    auto& vals = axis_vals[ju];
    if (sj == 0) {
      vals.push_back(0);
    } else {
      const int lo = 1 << (sj - 1), hi = (1 << sj) - 1;
      for (int k = -hi; k <= -lo; ++k) vals.push_back(k);
      for (int k = lo; k <= hi; ++k) vals.push_back(k);
    }
  }
  std::vector<FreqIndex> out;
  std::size_t count = 1;
  for (const auto& vals : axis_vals) count *= vals.size();
  out.reserve(count);
  std::vector<std::size_t> pos(static_cast<std::size_t>(dims), 0);
  while (true) {
    FreqIndex k{};
    for (int j = 0; j < dims; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      k[ju] = axis_vals[ju][pos[ju]];
    }
    out.push_back(k);
    int j = dims - 1;
    for (; j >= 0; --j) {
      const auto ju = static_cast<std::size_t>(j);
      if (++pos[ju] < axis_vals[ju].size()) break;
      pos[ju] = 0;
    }
    if (j < 0) break;
  }
  return out;
}

/// |rho(s)| without enumeration.
inline std::size_t rho_size(const BlockIndex& s, int dims) {
  std::size_t c = 1;
  for (int j = 0; j < dims; ++j) {
    const int sj = s.s[static_cast<std::size_t>(j)];
    c *= sj == 0 ? 1u : (std::size_t{1} << sj);
  }
  return c;
}

/// Restriction of the spectrum to rho(s); blocks over distinct s partition Z^m.
inline SpectralFunction dyadic_block(const SpectralFunction& g, const BlockIndex& s) {
  SpectralFunction out;
  out.dims = g.dims;
  for (const auto& [k, a] : g.coeffs)
    if (block_of(k, g.dims) == s) out.coeffs[k] = a;
  return out;
}

/// Distinct shells carrying at least one coefficient, ascending.
inline std::vector<BlockIndex> support_blocks(const SpectralFunction& g) {
  std::vector<BlockIndex> out;
  for (const auto& [k, a] : g.coeffs) out.push_back(block_of(k, g.dims));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// --- cross spec with rational-safe comparisons ------------------------------

/// The pair (gamma, n) defining the stepped hyperbolic cross
/// Q_n^gamma = union of rho(s) over <s,gamma> < n.
struct CrossSpec {
  int dims = 1;
  std::vector<double> gamma;
  double n = 0.0;

  void validate() const {
    if (static_cast<int>(gamma.size()) != dims)
      throw std::invalid_argument("CrossSpec: gamma length must equal dims");
    for (double gj : gamma)
      if (!(gj > 0.0)) throw std::invalid_argument("CrossSpec: gamma entries must be positive");
  }
};

namespace detail {

inline constexpr double kDotTol = 1e-9;

/// Scaled-integer view of (gamma, n) when all entries are rationals with a
/// common denominator q <= 10080: makes the kappa equality test exact.
struct ScaledSpec {
  bool exact = false;
  std::vector<std::int64_t> gamma;
  std::int64_t n = 0;
};

inline std::optional<ScaledSpec> try_scale(const CrossSpec& spec) {
  for (std::int64_t q = 1; q <= 10080; ++q) {
    bool ok = true;
    ScaledSpec s;
    s.exact = true;
    for (double gj : spec.gamma) {
      const double scaled = gj * static_cast<double>(q);
      const double r = std::round(scaled);
      if (std::abs(scaled - r) > kDotTol * static_cast<double>(q)) {
        ok = false;
        break;
      }
      s.gamma.push_back(static_cast<std::int64_t>(r));
    }
    if (!ok) continue;
    const double scaled_n = spec.n * static_cast<double>(q);
    const double rn = std::round(scaled_n);
    if (std::abs(scaled_n - rn) > kDotTol * static_cast<double>(q)) continue;
    s.n = static_cast<std::int64_t>(rn);
    return s;
  }
  return std::nullopt;
}

enum class DotClass { Below, Equal, Above };

struct DotClassifier {
  CrossSpec spec;
  std::optional<ScaledSpec> scaled;

  explicit DotClassifier(const CrossSpec& sp) : spec(sp), scaled(try_scale(sp)) {}

  DotClass classify(const BlockIndex& s) const {
    if (scaled) {
      std::int64_t dot = 0;
      for (int j = 0; j < spec.dims; ++j)
        dot += scaled->gamma[static_cast<std::size_t>(j)] * s.s[static_cast<std::size_t>(j)];
      if (dot == scaled->n) return DotClass::Equal;
      return dot < scaled->n ? DotClass::Below : DotClass::Above;
    }
    double dot = 0.0;
    for (int j = 0; j < spec.dims; ++j)
      dot += spec.gamma[static_cast<std::size_t>(j)] * s.s[static_cast<std::size_t>(j)];
    if (std::abs(dot - spec.n) <= kDotTol) return DotClass::Equal;
    return dot < spec.n ? DotClass::Below : DotClass::Above;
  }
};

template <typename Pred>
inline std::vector<BlockIndex> enumerate_box(std::span<const int> caps, int dims, Pred&& pred) {
  std::vector<BlockIndex> out;
  BlockIndex s{};
  int j = 0;
  while (true) {
    if (pred(s)) out.push_back(s);
    for (j = dims - 1; j >= 0; --j) {
      const auto ju = static_cast<std::size_t>(j);
      if (++s.s[ju] <= caps[ju]) break;
      s.s[ju] = 0;
    }
    if (j < 0) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace detail

/// Blocks of the cross: { s : <s,gamma> < n }, lexicographically sorted.
inline std::vector<BlockIndex> cross_blocks(const CrossSpec& spec) {
  spec.validate();
  if (spec.n <= 0.0) return {};
  detail::DotClassifier cls(spec);
  std::vector<int> caps(static_cast<std::size_t>(spec.dims));
  for (int j = 0; j < spec.dims; ++j)
    caps[static_cast<std::size_t>(j)] =
        static_cast<int>(std::ceil(spec.n / spec.gamma[static_cast<std::size_t>(j)])) + 1;
  return detail::enumerate_box(caps, spec.dims, [&](const BlockIndex& s) {
    return cls.classify(s) == detail::DotClass::Below;
  });
}

/// Truncated complement Y^m(gamma, n) = { s : <s,gamma> >= n, s_j <= cap_j }.
/// The cap is explicit because the full set is infinite.
inline std::vector<BlockIndex> shell_Y(const CrossSpec& spec, std::span<const int> s_cap) {
  spec.validate();
  if (static_cast<int>(s_cap.size()) != spec.dims)
    throw std::invalid_argument("shell_Y: cap length must equal dims");
  for (int c : s_cap)
    if (c < 0) throw std::invalid_argument("shell_Y: caps must be >= 0");
  detail::DotClassifier cls(spec);
  return detail::enumerate_box(s_cap, spec.dims, [&](const BlockIndex& s) {
    return cls.classify(s) != detail::DotClass::Below;
  });
}

/// Level set kappa^m(n, gamma) = { s : <s,gamma> = n }, with exact integer
/// comparison whenever (gamma, n) scales to integers, tolerance 1e-9 otherwise.
inline std::vector<BlockIndex> shell_kappa(const CrossSpec& spec) {
  spec.validate();
  if (spec.n < 0.0) return {};
  std::vector<int> caps(static_cast<std::size_t>(spec.dims));
  for (int j = 0; j < spec.dims; ++j)
    caps[static_cast<std::size_t>(j)] =
        static_cast<int>(std::floor(spec.n / spec.gamma[static_cast<std::size_t>(j)] + detail::kDotTol));
  detail::DotClassifier cls(spec);
  return detail::enumerate_box(caps, spec.dims, [&](const BlockIndex& s) {
    return cls.classify(s) == detail::DotClass::Equal;
  });
}

/// Keeps the coefficients whose shell lies inside the cross; the residual
/// g - projection has spectrum entirely outside Q_n^gamma.
inline SpectralFunction project_onto_cross(const SpectralFunction& g, const CrossSpec& spec) {
  spec.validate();
  detail::DotClassifier cls(spec);
  SpectralFunction out;
  out.dims = g.dims;
  for (const auto& [k, a] : g.coeffs)
    if (cls.classify(block_of(k, g.dims)) == detail::DotClass::Below) out.coeffs[k] = a;
  return out;
}

/// CSV dump of an index set: s_1,...,s_m per row, lexicographic.
inline std::string blocks_to_csv(std::span<const BlockIndex> blocks, int dims) {
  std::string out;
  char buf[32];
  for (const auto& b : blocks) {
    for (int j = 0; j < dims; ++j) {
      std::snprintf(buf, sizeof buf, "%s%d", j ? "," : "", b.s[static_cast<std::size_t>(j)]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

/// CSV dump of a spectrum: k_1,...,k_m,re,im per row, keys ascending.
inline std::string spectrum_to_csv(const SpectralFunction& g) {
  std::string out;
  char buf[96];
  for (const auto& [k, a] : g.coeffs) {
    std::string row;
    for (int j = 0; j < g.dims; ++j) {
      std::snprintf(buf, sizeof buf, "%s%d", j ? "," : "", k[static_cast<std::size_t>(j)]);
      row += buf;
    }
    std::snprintf(buf, sizeof buf, ",%.12g,%.12g\n", a.real(), a.imag());
    row += buf;
    out += row;
  }
  return out;
}

} // namespace lk
