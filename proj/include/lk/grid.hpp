// Uniformly sampled 2*pi-periodic functions of m variables (m <= 4) and the
// single-axis / iterated non-increasing rearrangements used by the
// rearrangement-based norms.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lk {

inline constexpr int kMaxDims = 4;

/// Dense samples of a 2*pi-periodic function at x_j = 2*pi*k_j/N_j,
/// k_j = 0..N_j-1. Axis 1 is fastest in memory, axis m slowest; the
/// periodic endpoint is not duplicated.
struct GridFunction {
  int dims = 1;
  std::vector<std::size_t> sizes;
  std::vector<std::complex<double>> values;

  static GridFunction zeros(const std::vector<std::size_t>& sizes_in) {
    GridFunction f;
    f.dims = static_cast<int>(sizes_in.size());
    if (f.dims < 1 || f.dims > kMaxDims)
      throw std::invalid_argument("GridFunction: dims must be in 1..4");
    f.sizes = sizes_in;
    std::size_t total = 1;
    for (std::size_t n : f.sizes) {
      if (n < 1) throw std::invalid_argument("GridFunction: sizes must be >= 1");
      total *= n;
    }
    f.values.assign(total, {0.0, 0.0});
    return f;
  }

  std::size_t total() const { return values.size(); }

  std::size_t index(std::span<const std::size_t> coord) const {
    std::size_t idx = 0;
    for (int j = dims - 1; j >= 0; --j) idx = idx * sizes[static_cast<std::size_t>(j)] + coord[static_cast<std::size_t>(j)];
    return idx;
  }

  std::complex<double>& at(std::span<const std::size_t> coord) { return values[index(coord)]; }
  const std::complex<double>& at(std::span<const std::size_t> coord) const { return values[index(coord)]; }
};

/// Equispaced step profile of a non-increasing rearrangement on (0,1]:
/// steps[i] is the value on ((i)/L, (i+1)/L], L = steps.size().
struct RearrangedProfile {
  std::vector<double> steps;

  std::size_t size() const { return steps.size(); }
};

/// |values| sorted descending, each step carrying measure 1/len.
inline RearrangedProfile rearrange_1d(std::span<const std::complex<double>> values) {
  if (values.empty()) throw std::invalid_argument("rearrange_1d: empty input");
  RearrangedProfile prof;
  prof.steps.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) prof.steps[i] = std::abs(values[i]);
  std::stable_sort(prof.steps.begin(), prof.steps.end(), std::greater<double>());
  return prof;
}

inline RearrangedProfile rearrange_1d(const std::vector<std::complex<double>>& values) {
  return rearrange_1d(std::span<const std::complex<double>>(values));
}

/// Replaces every 1-D fiber along `axis` (1-based) by the descending sort of
/// its moduli; all other axes untouched. Output values are non-negative reals.
inline GridFunction rearrange_axis(const GridFunction& f, int axis) {
  if (axis < 1 || axis > f.dims) throw std::invalid_argument("rearrange_axis: axis out of range");
  const std::size_t j = static_cast<std::size_t>(axis - 1);
  std::size_t stride = 1;
  for (std::size_t i = 0; i < j; ++i) stride *= f.sizes[i];
  const std::size_t len = f.sizes[j];
  const std::size_t block = stride * len;
  const std::size_t outer = f.total() / block;

  GridFunction out = f;
  std::vector<double> fiber(len);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < stride; ++i) {
      const std::size_t base = o * block + i;
      for (std::size_t k = 0; k < len; ++k) fiber[k] = std::abs(f.values[base + k * stride]);
      std::stable_sort(fiber.begin(), fiber.end(), std::greater<double>());
      for (std::size_t k = 0; k < len; ++k) out.values[base + k * stride] = fiber[k];
    }
  }
  return out;
}

/// rearrange_axis applied in axis order 1,2,...,m (innermost integral first).
inline GridFunction iterated_rearrangement(const GridFunction& f) {
  GridFunction g = f;
  for (int axis = 1; axis <= f.dims; ++axis) g = rearrange_axis(g, axis);
  return g;
}

// --- closed-form test-function catalog ------------------------------------

/// A catalog entry: zero, a constant, a finite sum of complex exponentials
/// a_i * e^{i<k_i, x>} with real amplitudes, or a product plateau equal to
/// `height` on the box {x_j/2pi < extent_j}.
struct CatalogSpec {
  enum class Kind { Zero, Constant, TrigSum, Plateau };

  struct Term {
    double amplitude = 1.0;
    std::array<int, kMaxDims> k{};
  };

  Kind kind = Kind::Zero;
  int dims = 1;
  double value = 0.0;            // Constant / Plateau height
  std::vector<double> extents;   // Plateau only, per-axis fraction in (0,1]
  std::vector<Term> terms;       // TrigSum only

  static CatalogSpec zero(int dims) { return {Kind::Zero, dims, 0.0, {}, {}}; }

  static CatalogSpec constant(int dims, double c) { return {Kind::Constant, dims, c, {}, {}}; }

  static CatalogSpec exponential(std::span<const int> k) {
    CatalogSpec s;
    s.kind = Kind::TrigSum;
    s.dims = static_cast<int>(k.size());
    Term t;
    std::copy(k.begin(), k.end(), t.k.begin());
    s.terms.push_back(t);
    return s;
  }

  static CatalogSpec trig_sum(int dims, std::vector<Term> terms) {
    CatalogSpec s;
    s.kind = Kind::TrigSum;
    s.dims = dims;
    s.terms = std::move(terms);
    return s;
  }

  static CatalogSpec plateau(double height, std::vector<double> extents) {
    CatalogSpec s;
    s.kind = Kind::Plateau;
    s.dims = static_cast<int>(extents.size());
    s.value = height;
    s.extents = std::move(extents);
    for (double e : s.extents)
      if (!(e > 0.0) || e > 1.0)
        throw std::invalid_argument("CatalogSpec: plateau extents must lie in (0,1]");
    return s;
  }

  /// Parses the textual form used by experiment configs:
  ///   "zero"                       -- zero function
  ///   "const:2.5"                  -- constant
  ///   "exp:1,0"                    -- e^{i<k,x>}
  ///   "sum:3@2,0;4@-3,1"           -- sum of amplitude@k terms
  ///   "plateau:2;0.5,1"            -- height;per-axis extents
  static CatalogSpec parse(std::string_view text, int dims);
};

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  while (true) {
    auto pos = s.find(sep);
    out.emplace_back(s.substr(0, pos));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

} // namespace detail

inline CatalogSpec CatalogSpec::parse(std::string_view text, int dims) {
  auto body = [&](std::string_view prefix) { return text.substr(prefix.size()); };
  try {
    if (text == "zero") return zero(dims);
    if (text.starts_with("const:")) return constant(dims, std::stod(std::string(body("const:"))));
    if (text.starts_with("exp:")) {
      auto parts = detail::split(body("exp:"), ',');
      if (static_cast<int>(parts.size()) != dims) throw std::invalid_argument("dims mismatch");
      Term t;
      for (int j = 0; j < dims; ++j) t.k[static_cast<std::size_t>(j)] = std::stoi(parts[static_cast<std::size_t>(j)]);
      return trig_sum(dims, {t});
    }
    if (text.starts_with("sum:")) {
      std::vector<Term> terms;
      for (const auto& item : detail::split(body("sum:"), ';')) {
        auto at = item.find('@');
        if (at == std::string::npos) throw std::invalid_argument("missing '@'");
        Term t;
        t.amplitude = std::stod(item.substr(0, at));
        auto parts = detail::split(std::string_view(item).substr(at + 1), ',');
        if (static_cast<int>(parts.size()) != dims) throw std::invalid_argument("dims mismatch");
        for (int j = 0; j < dims; ++j) t.k[static_cast<std::size_t>(j)] = std::stoi(parts[static_cast<std::size_t>(j)]);
        terms.push_back(t);
      }
      return trig_sum(dims, std::move(terms));
    }
    if (text.starts_with("plateau:")) {
      auto parts = detail::split(body("plateau:"), ';');
      if (parts.size() != 2) throw std::invalid_argument("expected height;extents");
      double height = std::stod(parts[0]);
      std::vector<double> extents;
      for (const auto& e : detail::split(parts[1], ',')) extents.push_back(std::stod(e));
      if (static_cast<int>(extents.size()) != dims) throw std::invalid_argument("dims mismatch");
      return plateau(height, std::move(extents));
    }
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("catalog: cannot parse '" + std::string(text) + "'");
  }
  throw std::invalid_argument("catalog: unknown entry '" + std::string(text) + "'");
}

/// Samples a catalog function at the grid nodes x_j = 2*pi*k_j/N_j.
inline GridFunction sample(const CatalogSpec& spec, const std::vector<std::size_t>& sizes) {
  if (static_cast<int>(sizes.size()) != spec.dims)
    throw std::invalid_argument("sample: sizes/dims mismatch");
  GridFunction f = GridFunction::zeros(sizes);
  const std::size_t total = f.total();
  std::array<std::size_t, kMaxDims> coord{};
  for (std::size_t idx = 0; idx < total; ++idx) {
    switch (spec.kind) {
      case CatalogSpec::Kind::Zero:
        break;
      case CatalogSpec::Kind::Constant:
        f.values[idx] = spec.value;
        break;
      case CatalogSpec::Kind::TrigSum: {
        std::complex<double> acc{0.0, 0.0};
        for (const auto& t : spec.terms) {
          double phase = 0.0;
          for (int j = 0; j < spec.dims; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            phase += 2.0 * std::numbers::pi * t.k[ju] *
                     (static_cast<double>(coord[ju]) / static_cast<double>(sizes[ju]));
          }
          acc += t.amplitude * std::complex<double>{std::cos(phase), std::sin(phase)};
        }
        f.values[idx] = acc;
        break;
      }
      case CatalogSpec::Kind::Plateau: {
        bool inside = true;
        for (int j = 0; j < spec.dims && inside; ++j) {
          const auto ju = static_cast<std::size_t>(j);
          inside = static_cast<double>(coord[ju]) <
                   spec.extents[ju] * static_cast<double>(sizes[ju]);
        }
        if (inside) f.values[idx] = spec.value;
        break;
      }
    }
    for (int j = 0; j < spec.dims; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      if (++coord[ju] < sizes[ju]) break;
      coord[ju] = 0;
    }
  }
  return f;
}

/// Debug dump, row-major with axis m slowest: one value per line as "re,im".
inline std::string to_csv(const GridFunction& f) {
  std::string out;
  out.reserve(f.total() * 8);
  char buf[64];
  for (const auto& z : f.values) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", z.real(), z.imag());
    out += buf;
  }
  return out;
}

} // namespace lk
