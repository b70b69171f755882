// Brute-force evaluation of the two auxiliary tail/level sums, the predicted
// orders they are compared against, and the bounded-ratio experiments that
// stand in for the asymptotic two-sided estimates at desk scale.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lk/besov.hpp"
#include "lk/norms.hpp"
#include "lk/spectral.hpp"
#include "lk/svfun.hpp"

namespace lk {

// --- ratio reports ----------------------------------------------------------

struct RatioPoint {
  double n = 0.0;
  double computed = 0.0;
  double predicted = 0.0;
  double ratio = 0.0;
};

enum class Verdict { BoundedAbove, BoundedBelow, TwoSided };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::BoundedAbove: return "bounded-above";
    case Verdict::BoundedBelow: return "bounded-below";
    case Verdict::TwoSided: return "two-sided";
  }
  return "?";
}

/// Per-n computed quantity, predicted order and their ratio. The stability
/// onset n0 is the smallest n after which the ratio's log-slope magnitude
/// stays below 0.02 per unit n through the end of the window.
struct RatioReport {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> params; // config echo
  std::vector<std::string> notes;
  std::vector<RatioPoint> points;
  Verdict verdict = Verdict::BoundedAbove;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t n0_index = npos;

  bool stable() const { return n0_index != npos; }
  double n0() const { return stable() ? points[n0_index].n : std::numeric_limits<double>::quiet_NaN(); }

  double min_ratio(std::size_t from = 0) const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = from; i < points.size(); ++i) m = std::min(m, points[i].ratio);
    return m;
  }
  double max_ratio(std::size_t from = 0) const {
    double m = 0.0;
    for (std::size_t i = from; i < points.size(); ++i) m = std::max(m, points[i].ratio);
    return m;
  }
  /// max/min over [n0, end]; over the whole window when no n0 was found.
  double stable_window_spread() const {
    const std::size_t from = stable() ? n0_index : 0;
    return max_ratio(from) / min_ratio(from);
  }

  void finalize() {
    n0_index = npos;
    if (points.size() < 2) return;
    constexpr double kSlopeTol = 0.02;
    std::size_t k0 = 0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
      const double dn = points[i + 1].n - points[i].n;
      const double slope = std::abs(std::log(points[i + 1].ratio / points[i].ratio)) / dn;
      if (!(slope < kSlopeTol)) k0 = i + 1;
    }
    if (k0 + 1 < points.size()) n0_index = k0;
  }
};

/// CSV with a '#'-prefixed parameter echo sufficient to reconstruct the
/// config; fixed 12-significant-digit formatting for byte-stable reruns.
inline std::string report_to_csv(const RatioReport& rep) {
  std::string out = "# lklab ratio report\n# experiment=" + rep.experiment + "\n";
  for (const auto& [k, v] : rep.params) out += "# " + k + "=" + v + "\n";
  char buf[160];
  if (rep.stable())
    std::snprintf(buf, sizeof buf, "# verdict=%s n0=%.12g window_spread=%.12g\n",
                  to_string(rep.verdict), rep.n0(), rep.stable_window_spread());
  else
    std::snprintf(buf, sizeof buf, "# verdict=%s n0=unstable window_spread=%.12g\n",
                  to_string(rep.verdict), rep.stable_window_spread());
  out += buf;
  for (const auto& note : rep.notes) out += "# note: " + note + "\n";
  out += "n,computed,predicted,ratio\n";
  for (const auto& p : rep.points) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g\n", p.n, p.computed, p.predicted,
                  p.ratio);
    out += buf;
  }
  return out;
}

/// Two-column (n, ratio) series for plotting; header comment first.
inline std::string report_to_plotdata(const RatioReport& rep) {
  if (rep.points.empty()) throw std::invalid_argument("plotdata: empty report");
  std::string out = "# " + rep.experiment + " ratio series (n, ratio)\n";
  char buf[64];
  for (const auto& p : rep.points) {
    std::snprintf(buf, sizeof buf, "%.12g %.12g\n", p.n, p.ratio);
    out += buf;
  }
  return out;
}

// --- lemma parameter sets -----------------------------------------------------

/// Parameters shared by the tail sum (exponents = theta) and the level sum
/// (exponents = eps). Weight class certification is recorded, not enforced:
/// the audit result travels with the report.
struct LemmaParams {
  int m = 2;
  double alpha = 1.0;
  std::vector<double> gamma;
  std::vector<double> gamma_prime; // level sum ignores it
  std::vector<double> exponents;
  std::vector<WeightV> V;
  std::vector<ClassReport> certifications;

  void validate() const {
    if (m < 1 || m > kMaxDims) throw std::invalid_argument("LemmaParams: m must be in 1..4");
    const auto mu = static_cast<std::size_t>(m);
    if (gamma.size() != mu || gamma_prime.size() != mu || exponents.size() != mu ||
        V.size() != mu)
      throw std::invalid_argument("LemmaParams: all parameter vectors must have length m");
    if (!(alpha > 0.0)) throw std::invalid_argument("LemmaParams: requires alpha > 0");
    for (std::size_t j = 0; j < mu; ++j) {
      if (!(gamma_prime[j] > 0.0) || !(gamma_prime[j] <= gamma[j] + 1e-12))
        throw std::invalid_argument("LemmaParams: requires 0 < gamma'_j <= gamma_j");
      if (!(exponents[j] > 0.0))
        throw std::invalid_argument("LemmaParams: requires positive exponents");
    }
  }

  double delta() const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < gamma.size(); ++j) d = std::min(d, gamma[j] / gamma_prime[j]);
    return d;
  }

  std::vector<int> A() const {
    std::vector<int> out;
    const double d = delta();
    for (std::size_t j = 0; j < gamma.size(); ++j)
      if (gamma[j] / gamma_prime[j] <= d * (1.0 + 1e-9)) out.push_back(static_cast<int>(j));
    return out;
  }

  int j1() const { return A().front(); }

  /// Runs the SVL audit on every weight over the dyadic grid 2^0..2^kmax.
  void certify(double eps = 1.0, int kmax = 32) {
    certifications.clear();
    const auto grid = dyadic_grid(kmax);
    for (const auto& w : V) certifications.push_back(check_svl_class(w.base(), eps, grid));
  }
};

// --- tail sum over the truncated cross complement ----------------------------

struct TailCapInfo {
  std::vector<int> caps;
  double last_rel_delta = 0.0;
};

namespace detail {

/// Per-axis term table g_j(s) = 2^{-alpha gamma_j s} V_j(2^{-s}), s <= cap.
inline std::vector<double> axis_terms(double alpha, double gamma_j, const WeightV& V, int cap) {
  std::vector<double> g(static_cast<std::size_t>(cap) + 1);
  for (int s = 0; s <= cap; ++s)
    g[static_cast<std::size_t>(s)] = std::exp2(-alpha * gamma_j * s) * V.at_dyadic(s);
  return g;
}

struct AxisTables {
  std::vector<double> g;      // terms
  std::vector<double> suffix; // l_theta suffix norms of g (axis 1 only)
  double full = 0.0;          // l_theta norm over the whole axis
  double theta = 1.0;
};

inline double combine_pair(double acc, double x, double theta) {
  return theta == kInf ? std::max(acc, x) : acc + std::pow(x, theta);
}

inline double finish(double acc, double theta) {
  return theta == kInf ? acc : std::pow(acc, 1.0 / theta);
}

/// Mixed norm over { s : sum s_j gamma'_j >= residual, s_j <= cap_j } of the
/// product terms, nesting axis 1 innermost. Axis 1 resolves through suffix
/// tables; outer axes recurse, switching to the full product once the
/// residual is exhausted.
struct TailEvaluator {
  const LemmaParams* lp = nullptr;
  std::vector<AxisTables> axes;

  double full_product(int level) const {
    double out = 1.0;
    for (int j = 0; j <= level; ++j) out *= axes[static_cast<std::size_t>(j)].full;
    return out;
  }

  double eval(int level, double residual) const {
    const auto& ax = axes[static_cast<std::size_t>(level)];
    if (residual <= 1e-9) return full_product(level);
    if (level == 0) {
      const double gp = lp->gamma_prime[0];
      const auto smin = static_cast<std::ptrdiff_t>(std::ceil(residual / gp - 1e-9));
      if (smin >= static_cast<std::ptrdiff_t>(ax.suffix.size())) return 0.0;
      return ax.suffix[static_cast<std::size_t>(std::max<std::ptrdiff_t>(smin, 0))];
    }
    const double gp = lp->gamma_prime[static_cast<std::size_t>(level)];
    double acc = ax.theta == kInf ? 0.0 : 0.0;
    for (std::size_t s = 0; s < ax.g.size(); ++s) {
      const double inner = eval(level - 1, residual - static_cast<double>(s) * gp);
      acc = combine_pair(acc, ax.g[s] * inner, ax.theta);
    }
    return finish(acc, ax.theta);
  }
};

inline double tail_sum_with_caps(const LemmaParams& lp, double n, std::span<const int> caps) {
  TailEvaluator ev;
  ev.lp = &lp;
  ev.axes.resize(static_cast<std::size_t>(lp.m));
  for (int j = 0; j < lp.m; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    auto& ax = ev.axes[ju];
    ax.theta = lp.exponents[ju];
    ax.g = axis_terms(lp.alpha, lp.gamma[ju], lp.V[ju], caps[ju]);
    double acc = 0.0;
    for (double x : ax.g) acc = combine_pair(acc, x, ax.theta);
    ax.full = finish(acc, ax.theta);
    if (j == 0) {
      // suffix l_theta norms, accumulated from the top
      ax.suffix.assign(ax.g.size(), 0.0);
      double run = 0.0;
      for (std::size_t s = ax.g.size(); s-- > 0;) {
        run = combine_pair(run, ax.g[s], ax.theta);
        ax.suffix[s] = finish(run, ax.theta);
      }
    }
  }
  return ev.eval(lp.m - 1, n);
}

} // namespace detail

inline constexpr int kTailCapLimit = 1 << 14;

/// I_n: mixed norm of 2^{-alpha<s,gamma>} prod_j V_j(2^{-s_j}) over the
/// truncated complement Y^m(gamma', n). Caps start from the geometric tail
/// majorant with SV slack alpha/2 and grow until enlarging them moves the
/// value by less than tail_tol relatively.
inline double lemma1_sum(const LemmaParams& lp, double n, double tail_tol = 1e-9,
                         TailCapInfo* info = nullptr) {
  lp.validate();
  if (!(tail_tol > 0.0)) throw std::invalid_argument("lemma1_sum: tail_tol must be positive");
  std::vector<int> caps(static_cast<std::size_t>(lp.m));
  for (int j = 0; j < lp.m; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const double base = std::max(n, 1.0) / lp.gamma_prime[ju];
    const double slack_steps = 2.0 * std::log2(1.0 / tail_tol) / (lp.alpha * lp.gamma[ju]);
    caps[ju] = static_cast<int>(std::ceil(base + slack_steps)) + 8;
  }
  double value = detail::tail_sum_with_caps(lp, n, caps);
  while (true) {
    std::vector<int> wider(caps);
    for (auto& c : wider) c += 16;
    for (int c : wider)
      if (c > kTailCapLimit)
        throw std::runtime_error("lemma1_sum: tail tolerance unreachable within cap limit 2^14");
    const double widened = detail::tail_sum_with_caps(lp, n, wider);
    const double rel = value > 0.0 ? std::abs(widened - value) / widened : 0.0;
    if (rel < tail_tol) {
      if (info) {
        info->caps = caps;
        info->last_rel_delta = rel;
      }
      return widened;
    }
    caps = std::move(wider);
    value = widened;
  }
}

/// Predicted order of the tail sum:
/// 2^{-n alpha delta} prod_{j in A} V_j(2^{-n}) (n+1)^{sum_{A \ j1} 1/theta_j}.
/// The polynomial factor uses base n+1, matching the proof's form; the
/// closed-form convergence checks pin this choice.
inline double lemma1_bound(const LemmaParams& lp, double n) {
  lp.validate();
  if (!(n >= 1.0)) throw std::invalid_argument("lemma1_bound: requires n >= 1");
  const auto a_set = lp.A();
  double out = std::exp2(-n * lp.alpha * lp.delta());
  for (int j : a_set) out *= lp.V[static_cast<std::size_t>(j)](std::exp2(-n));
  double esum = 0.0;
  for (std::size_t i = 1; i < a_set.size(); ++i) {
    const double th = lp.exponents[static_cast<std::size_t>(a_set[i])];
    esum += th == kInf ? 0.0 : 1.0 / th;
  }
  return out * std::pow(n + 1.0, esum);
}

/// J_n: mixed norm of the same terms over the level set kappa^m(n, gamma),
/// by exact finite enumeration. Empty kappa yields 0 (reported, not fatal).
inline double lemma2_sum(const LemmaParams& lp, double n, bool* empty_kappa = nullptr) {
  lp.validate();
  CrossSpec spec;
  spec.dims = lp.m;
  spec.gamma = lp.gamma;
  spec.n = n;
  const auto kappa = shell_kappa(spec);
  if (empty_kappa) *empty_kappa = kappa.empty();
  if (kappa.empty()) return 0.0;
  std::vector<SeqEntry> entries;
  entries.reserve(kappa.size());
  for (const auto& s : kappa) {
    double dot = 0.0, v = 1.0;
    for (int j = 0; j < lp.m; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      dot += lp.gamma[ju] * s.s[ju];
      v *= lp.V[ju].at_dyadic(s.s[ju]);
    }
    SeqEntry e;
    for (int j = 0; j < lp.m; ++j) e.n[static_cast<std::size_t>(j)] = s.s[static_cast<std::size_t>(j)];
    e.value = std::exp2(-lp.alpha * dot) * v;
    entries.push_back(e);
  }
  return mixed_seq_norm(std::move(entries),
                        std::span<const double>(lp.exponents).first(static_cast<std::size_t>(lp.m)));
}

/// Predicted order of the level sum:
/// 2^{-n alpha} prod_j V_j(2^{-n}) n^{sum_{j>=2} 1/eps_j}.
inline double lemma2_bound(const LemmaParams& lp, double n) {
  lp.validate();
  if (!(n >= 1.0)) throw std::invalid_argument("lemma2_bound: requires n >= 1");
  double out = std::exp2(-n * lp.alpha);
  for (int j = 0; j < lp.m; ++j) out *= lp.V[static_cast<std::size_t>(j)](std::exp2(-n));
  double esum = 0.0;
  for (int j = 1; j < lp.m; ++j) {
    const double ej = lp.exponents[static_cast<std::size_t>(j)];
    esum += ej == kInf ? 0.0 : 1.0 / ej;
  }
  return out * std::pow(n, esum);
}

// --- the two-sided estimate ---------------------------------------------------

enum class TheoremRegime { Auto, Case1, Case2 };

/// Detects which case the exponent pair (theta, tau^(2)) falls into:
/// case 1 when tau^(2)_j < theta_j for all j, case 2 when theta_j <= tau^(2)_j
/// for all j. Mixed configurations are rejected.
inline TheoremRegime detect_regime(const TheoremParams& tp) {
  bool case1 = true, case2 = true;
  for (int j = 0; j < tp.dims(); ++j) {
    const auto ju = static_cast<std::size_t>(j);
    if (!(tp.target.tau[ju] < tp.source.theta[ju])) case1 = false;
    if (!(tp.source.theta[ju] <= tp.target.tau[ju])) case2 = false;
  }
  if (case1) return TheoremRegime::Case1;
  if (case2) return TheoremRegime::Case2;
  throw std::invalid_argument(
      "theorem1: mixed regime: need tau^(2)_j < theta_j for all j or theta_j <= tau^(2)_j for all j");
}

/// Predicted order of the best approximation over the class:
/// 2^{-n alpha} prod_{j in A} (V^(2)_j / V^(1)_j)(2^{-n}) times, in case 1,
/// n^{sum_{A \ j1} (1/tau^(2)_j - 1/theta_j)}.
inline double theorem1_predicted(const TheoremParams& tp, double n,
                                 TheoremRegime regime = TheoremRegime::Auto) {
  tp.validate();
  if (regime == TheoremRegime::Auto) regime = detect_regime(tp);
  double out = std::exp2(-n * tp.alpha());
  const auto a_set = tp.A();
  for (int j : a_set) {
    const auto ju = static_cast<std::size_t>(j);
    out *= tp.target.V[ju](std::exp2(-n)) / tp.source.space.V[ju](std::exp2(-n));
  }
  if (regime == TheoremRegime::Case1) {
    double esum = 0.0;
    for (std::size_t i = 1; i < a_set.size(); ++i) {
      const auto ju = static_cast<std::size_t>(a_set[i]);
      const double th = tp.source.theta[ju];
      esum += 1.0 / tp.target.tau[ju] - (th == kInf ? 0.0 : 1.0 / th);
    }
    out *= std::pow(n, esum);
  }
  return out;
}

/// Lower-bound experiment: per n, normalize the shell sum by its class
/// functional and compare its target norm (equal to the projection error,
/// the spectrum lies outside the cross) against the predicted order.
inline RatioReport theorem1_lower_experiment(const TheoremParams& tp, int n_lo, int n_hi,
                                             const BlockNormOptions& opts = {}) {
  tp.validate();
  const TheoremRegime regime = detect_regime(tp);
  if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("theorem1_lower: bad window");
  RatioReport rep;
  rep.experiment = "theorem1-lower";
  rep.verdict = Verdict::BoundedBelow;
  for (int n = n_lo; n <= n_hi; ++n) {
    const BlockPoly f1 = extremal_f1(tp, n);
    const BlockFunctional func = besov_functional_blocks(f1, tp.source, opts);
    const double err = block_poly_aniso_norm(f1, tp.target, opts) / func.value;
    const double pred = theorem1_predicted(tp, n, regime);
    rep.points.push_back({static_cast<double>(n), err, pred, err / pred});
  }
  rep.finalize();
  return rep;
}

enum class UpperRecipe { F2Shells, LacunaryMixture, FullDiagonal };

inline const char* to_string(UpperRecipe r) {
  switch (r) {
    case UpperRecipe::F2Shells: return "f2-shells";
    case UpperRecipe::LacunaryMixture: return "lacunary";
    case UpperRecipe::FullDiagonal: return "diagonal";
  }
  return "?";
}

/// Upper-bound experiment: class members with spectrum outside the cross.
/// Per n the computed value is the worst normalized projection error over
/// the recipe members; per-member ratios land in the notes.
inline RatioReport theorem1_upper_experiment(const TheoremParams& tp, int n_lo, int n_hi,
                                             std::span<const UpperRecipe> recipes,
                                             const BlockNormOptions& opts = {}) {
  tp.validate();
  const TheoremRegime regime = detect_regime(tp);
  if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("theorem1_upper: bad window");
  if (recipes.empty()) throw std::invalid_argument("theorem1_upper: no recipes");

  RatioReport rep;
  rep.experiment = "theorem1-upper";
  rep.verdict = Verdict::BoundedAbove;
  for (int n = n_lo; n <= n_hi; ++n) {
    const double pred = theorem1_predicted(tp, n, regime);
    double worst = 0.0;
    for (const UpperRecipe recipe : recipes) {
      std::vector<std::pair<std::string, BlockPoly>> members;
      if (recipe == UpperRecipe::F2Shells) {
        const BlockPoly diag = extremal_f1(tp, n); // reuse the kappa enumeration
        const auto& blocks = diag.blocks;
        std::vector<std::size_t> picks = {0, blocks.size() / 2, blocks.size() - 1};
        std::sort(picks.begin(), picks.end());
        picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
        for (std::size_t pi : picks) {
          members.emplace_back("f2@" + std::to_string(pi),
                               extremal_f2(tp, n, blocks[pi].first));
        }
        // one member from the next shell out
        const BlockPoly next = extremal_f1(tp, n + 1);
        members.emplace_back("f2-outer", extremal_f2(tp, n, next.blocks.front().first));
      } else if (recipe == UpperRecipe::LacunaryMixture) {
        const BlockPoly diag = extremal_f1(tp, n);
        BlockPoly mix;
        mix.dims = diag.dims;
        for (std::size_t i = 0; i < diag.blocks.size(); i += 2) mix.blocks.push_back(diag.blocks[i]);
        members.emplace_back("lacunary", std::move(mix));
      } else {
        members.emplace_back("diagonal", extremal_f1(tp, n));
      }
      for (auto& [tag, member] : members) {
        const BlockFunctional func = besov_functional_blocks(member, tp.source, opts);
        const double err = block_poly_aniso_norm(member, tp.target, opts) / func.value;
        const double ratio = err / pred;
        worst = std::max(worst, ratio);
        char buf[128];
        std::snprintf(buf, sizeof buf, "n=%d member=%s ratio=%.12g", n, tag.c_str(), ratio);
        rep.notes.emplace_back(buf);
      }
    }
    rep.points.push_back({static_cast<double>(n), worst * pred, pred, worst});
  }
  rep.finalize();
  return rep;
}

} // namespace lk
