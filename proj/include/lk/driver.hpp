// Experiment driver behind the command-line tool: validates a flat config,
// runs the requested computation, writes CSV / plot-data artifacts and
// returns the verdict. Exit-code contract: 0 verdict pass, 2 verdict fail,
// 1 error (bad config, violated hypothesis, I/O failure).
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "lk/besov.hpp"
#include "lk/bounds.hpp"
#include "lk/config.hpp"
#include "lk/norms.hpp"
#include "lk/spectral.hpp"
#include "lk/svfun.hpp"

namespace lk {

struct RunResult {
  int exit_code = 1;
  std::string verdict;
  std::vector<std::string> artifacts;
};

namespace detail {

inline std::vector<WeightV> parse_weights(const Config& cfg, const std::string& key, int m) {
  std::vector<WeightV> out;
  for (const auto& s : cfg.get_array(key)) out.emplace_back(SVFunction::parse(s));
  if (static_cast<int>(out.size()) != m)
    throw std::invalid_argument("config: key '" + key + "' must list " + std::to_string(m) +
                                " weights");
  return out;
}

inline std::vector<double> parse_axis_doubles(const Config& cfg, const std::string& key, int m) {
  auto v = cfg.get_double_array(key);
  if (static_cast<int>(v.size()) != m)
    throw std::invalid_argument("config: key '" + key + "' must list " + std::to_string(m) +
                                " values");
  return v;
}

inline std::string write_artifact(const std::string& out_dir, const std::string& name,
                                  const std::string& content) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::string path = (fs::path(out_dir) / name).string();
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write artifact '" + path + "'");
  f << content;
  if (!f) throw std::runtime_error("write failed for artifact '" + path + "'");
  return path;
}

inline std::string echo_header(const Config& cfg, const std::string& experiment) {
  std::string out = "# lklab " + experiment + "\n";
  for (const auto& [k, v] : cfg.echo()) out += "# " + k + "=" + v + "\n";
  return out;
}

inline SpaceParams parse_space(const Config& cfg, int m, const std::string& p_key,
                               const std::string& tau_key, const std::string& v_key) {
  SpaceParams sp;
  sp.p = parse_axis_doubles(cfg, p_key, m);
  sp.tau = parse_axis_doubles(cfg, tau_key, m);
  sp.V = parse_weights(cfg, v_key, m);
  sp.validate();
  return sp;
}

inline TheoremParams parse_theorem(const Config& cfg) {
  const int m = cfg.get_int("m");
  TheoremParams tp;
  tp.source.space = parse_space(cfg, m, "p", "tau1", "V1");
  tp.source.r = parse_axis_doubles(cfg, "r", m);
  tp.source.theta = parse_axis_doubles(cfg, "theta", m);
  tp.target = parse_space(cfg, m, "q", "tau2", "V2");
  tp.gamma_prime = parse_axis_doubles(cfg, "gamma_prime", m);
  tp.validate();
  return tp;
}

inline BlockNormOptions parse_block_opts(const Config& cfg) {
  BlockNormOptions opts;
  opts.oversample_log2 = cfg.get_int_or("oversample", 0);
  return opts;
}

inline void attach_ratio_echo(RatioReport& rep, const Config& cfg) {
  rep.params = cfg.echo();
}

inline RunResult finish_ratio_report(RatioReport rep, const Config& cfg,
                                     const std::string& out_dir, const std::string& stem,
                                     bool pass, const std::string& detail_msg) {
  attach_ratio_echo(rep, cfg);
  RunResult res;
  res.artifacts.push_back(write_artifact(out_dir, stem + ".csv", report_to_csv(rep)));
  res.artifacts.push_back(write_artifact(out_dir, stem + ".plot", report_to_plotdata(rep)));
  res.exit_code = pass ? 0 : 2;
  res.verdict = std::string(pass ? "PASS " : "FAIL ") + stem + ": " + detail_msg;
  return res;
}

// --- per-experiment runners ---------------------------------------------------

inline RunResult run_norm(const Config& cfg, const std::string& out_dir) {
  const int m = cfg.get_int("m");
  SpaceParams sp = parse_space(cfg, m, "p", "tau", "V");
  const int grid = cfg.get_int_or("grid", m == 1 ? 4096 : 256);
  const auto spec = CatalogSpec::parse(cfg.get("function"), m);
  const GridFunction f = sample(spec, std::vector<std::size_t>(static_cast<std::size_t>(m),
                                                               static_cast<std::size_t>(grid)));
  const double value = aniso_lk_norm(f, sp);
  std::string csv = echo_header(cfg, "norm");
  char buf[96];
  std::snprintf(buf, sizeof buf, "value\n%.12g\n", value);
  csv += buf;
  RunResult res;
  res.artifacts.push_back(write_artifact(out_dir, "norm.csv", csv));
  std::snprintf(buf, sizeof buf, "PASS norm: value=%.12g", value);
  res.verdict = buf;
  res.exit_code = 0;
  return res;
}

inline RunResult run_cross(const Config& cfg, const std::string& out_dir) {
  CrossSpec spec;
  spec.dims = cfg.get_int("m");
  spec.gamma = parse_axis_doubles(cfg, "gamma", spec.dims);
  spec.n = cfg.get_double("n");
  const auto blocks = cross_blocks(spec);
  std::size_t freqs = 0;
  for (const auto& b : blocks) freqs += rho_size(b, spec.dims);
  std::string csv = echo_header(cfg, "cross") + blocks_to_csv(blocks, spec.dims);
  RunResult res;
  res.artifacts.push_back(write_artifact(out_dir, "cross.csv", csv));
  char buf[96];
  std::snprintf(buf, sizeof buf, "PASS cross: blocks=%zu frequencies=%zu", blocks.size(), freqs);
  res.verdict = buf;
  res.exit_code = 0;
  return res;
}

inline RunResult run_block_norm(const Config& cfg, const std::string& out_dir) {
  const int m = cfg.get_int("m");
  SpaceParams sp = parse_space(cfg, m, "p", "tau", "V");
  const int smax = cfg.get_int("smax");
  if (smax < 0) throw std::invalid_argument("config: smax must be >= 0");
  const double limit = cfg.get_double_or("ratio_window", 8.0);

  std::string csv = echo_header(cfg, "block-norm") + "s,computed,predicted,ratio\n";
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  std::vector<int> caps(static_cast<std::size_t>(m), smax);
  for (const auto& s : detail::enumerate_box(caps, m, [](const BlockIndex&) { return true; })) {
    double predicted = 1.0;
    for (int j = 0; j < m; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      predicted *= std::exp2(s.s[ju] * (1.0 - 1.0 / sp.p[ju])) * sp.V[ju].at_dyadic(s.s[ju]);
    }
    const double computed = separable_block_norm(s, 1.0, sp);
    const double ratio = computed / predicted;
    rmin = std::min(rmin, ratio);
    rmax = std::max(rmax, ratio);
    char buf[160];
    std::string srow;
    for (int j = 0; j < m; ++j) {
      std::snprintf(buf, sizeof buf, "%s%d", j ? " " : "", s.s[static_cast<std::size_t>(j)]);
      srow += buf;
    }
    std::snprintf(buf, sizeof buf, "%s,%.12g,%.12g,%.12g\n", srow.c_str(), computed, predicted,
                  ratio);
    csv += buf;
  }
  const double spread = rmax / rmin;
  const bool pass = spread <= limit;
  RunResult res;
  res.artifacts.push_back(write_artifact(out_dir, "block_norm.csv", csv));
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s block-norm: ratio spread=%.6g (limit %.6g)",
                pass ? "PASS" : "FAIL", spread, limit);
  res.verdict = buf;
  res.exit_code = pass ? 0 : 2;
  return res;
}

inline RunResult run_sv_check(const Config& cfg, const std::string& out_dir) {
  const SVFunction v = SVFunction::parse(cfg.get("v"));
  const double eps = cfg.get_double("epsilon");
  const int kmax = cfg.get_int_or("kmax", 32);
  const bool svl = cfg.get_int_or("svl", 0) != 0;
  const auto grid = dyadic_grid(kmax);
  const ClassReport rep = svl ? check_svl_class(v, eps, grid) : check_sv_class(v, eps, grid);

  std::string csv = echo_header(cfg, "sv-check");
  char buf[192];
  std::snprintf(buf, sizeof buf, "# note: %s, C_slack=%.6g\ncheck,pass,k0,worst_violation\n",
                rep.note.c_str(), rep.slack);
  csv += buf;
  std::snprintf(buf, sizeof buf, "t^eps_up,%d,%zu,%.12g\n", rep.up.eventually ? 1 : 0, rep.up.k0,
                rep.up.worst_violation);
  csv += buf;
  std::snprintf(buf, sizeof buf, "t^-eps_down,%d,%zu,%.12g\n", rep.down.eventually ? 1 : 0,
                rep.down.k0, rep.down.worst_violation);
  csv += buf;
  if (svl) {
    std::snprintf(buf, sizeof buf, "log2t_up,%d,%zu,%.12g\n", rep.log_up.eventually ? 1 : 0,
                  rep.log_up.k0, rep.log_up.worst_violation);
    csv += buf;
  }
  RunResult res;
  res.artifacts.push_back(write_artifact(out_dir, "sv_check.csv", csv));
  std::snprintf(buf, sizeof buf, "%s sv-check: %s is %sin %s (eps=%g, slack convention %.6g)",
                rep.pass ? "PASS" : "FAIL", v.str().c_str(), rep.pass ? "" : "NOT ",
                svl ? "SVL[1,inf)" : "SV[1,inf)", eps, rep.slack);
  res.verdict = buf;
  res.exit_code = rep.pass ? 0 : 2;
  return res;
}

inline LemmaParams parse_lemma(const Config& cfg, bool lemma1) {
  LemmaParams lp;
  lp.m = cfg.get_int("m");
  lp.alpha = cfg.get_double("alpha");
  lp.gamma = parse_axis_doubles(cfg, "gamma", lp.m);
  lp.gamma_prime = lemma1 ? parse_axis_doubles(cfg, "gamma_prime", lp.m) : lp.gamma;
  lp.exponents = parse_axis_doubles(cfg, lemma1 ? "theta" : "eps", lp.m);
  lp.V = parse_weights(cfg, "V", lp.m);
  lp.validate();
  lp.certify();
  return lp;
}

inline RunResult run_lemma1(const Config& cfg, const std::string& out_dir) {
  LemmaParams lp = parse_lemma(cfg, true);
  const auto [n_lo, n_hi] = cfg.get_window("window");
  if (n_lo < 1) throw std::invalid_argument("config: window must start at n >= 1");
  const double tail_tol = cfg.get_double_or("tail_tol", 1e-9);
  const double limit = cfg.get_double_or("ratio_window", 10.0);

  RatioReport rep;
  rep.experiment = "lemma1";
  rep.verdict = Verdict::BoundedAbove;
  TailCapInfo caps;
  for (int n = n_lo; n <= n_hi; ++n) {
    const double computed = lemma1_sum(lp, n, tail_tol, &caps);
    const double predicted = lemma1_bound(lp, n);
    rep.points.push_back({static_cast<double>(n), computed, predicted, computed / predicted});
  }
  rep.finalize();
  {
    char buf[96];
    std::string caps_str;
    for (int c : caps.caps) {
      std::snprintf(buf, sizeof buf, "%s%d", caps_str.empty() ? "" : ",", c);
      caps_str += buf;
    }
    rep.notes.push_back("truncation caps at n_max: [" + caps_str + "]");
    for (std::size_t j = 0; j < lp.certifications.size(); ++j) {
      std::snprintf(buf, sizeof buf, "weight %zu SVL certified: %s", j + 1,
                    lp.certifications[j].pass ? "yes" : "no");
      rep.notes.emplace_back(buf);
    }
  }
  const bool pass = rep.stable() && rep.stable_window_spread() <= limit;
  char msg[160];
  std::snprintf(msg, sizeof msg, "ratio spread=%.6g over stable window (limit %.6g), n0=%.6g",
                rep.stable_window_spread(), limit, rep.n0());
  return finish_ratio_report(std::move(rep), cfg, out_dir, "lemma1", pass, msg);
}

inline RunResult run_lemma2(const Config& cfg, const std::string& out_dir) {
  LemmaParams lp = parse_lemma(cfg, false);
  const auto [n_lo, n_hi] = cfg.get_window("window");
  if (n_lo < 1) throw std::invalid_argument("config: window must start at n >= 1");

  RatioReport rep;
  rep.experiment = "lemma2";
  rep.verdict = Verdict::BoundedBelow;
  bool any_empty = false;
  for (int n = n_lo; n <= n_hi; ++n) {
    bool empty = false;
    const double computed = lemma2_sum(lp, n, &empty);
    any_empty = any_empty || empty;
    if (empty) {
      rep.notes.push_back("kappa empty at n=" + std::to_string(n) + "; point skipped");
      continue;
    }
    const double predicted = lemma2_bound(lp, n);
    rep.points.push_back({static_cast<double>(n), computed, predicted, computed / predicted});
  }
  rep.finalize();
  const bool pass = !rep.points.empty() && rep.stable() && rep.min_ratio() > 0.0;
  char msg[160];
  std::snprintf(msg, sizeof msg, "min ratio=%.6g, spread=%.6g%s", rep.min_ratio(),
                rep.stable_window_spread(), any_empty ? ", some kappa levels empty" : "");
  return finish_ratio_report(std::move(rep), cfg, out_dir, "lemma2", pass, msg);
}

inline RunResult run_theorem1_lower(const Config& cfg, const std::string& out_dir) {
  const TheoremParams tp = parse_theorem(cfg);
  const auto [n_lo, n_hi] = cfg.get_window("window");
  const double limit = cfg.get_double_or("ratio_window", 4.0);
  RatioReport rep = theorem1_lower_experiment(tp, n_lo, n_hi, parse_block_opts(cfg));
  const double spread = rep.max_ratio() / rep.min_ratio();
  const bool pass = spread <= limit && rep.min_ratio() > 0.0;
  char msg[160];
  std::snprintf(msg, sizeof msg, "full-window ratio spread=%.6g (limit %.6g), min ratio=%.6g",
                spread, limit, rep.min_ratio());
  return finish_ratio_report(std::move(rep), cfg, out_dir, "theorem1_lower", pass, msg);
}

inline RunResult run_theorem1_upper(const Config& cfg, const std::string& out_dir) {
  const TheoremParams tp = parse_theorem(cfg);
  const auto [n_lo, n_hi] = cfg.get_window("window");
  const double k_max = cfg.get_double_or("k_max", 6.0);
  std::vector<UpperRecipe> recipes;
  for (const auto& r : cfg.get_array("recipes")) {
    if (r == "f2-shells") recipes.push_back(UpperRecipe::F2Shells);
    else if (r == "lacunary") recipes.push_back(UpperRecipe::LacunaryMixture);
    else if (r == "diagonal") recipes.push_back(UpperRecipe::FullDiagonal);
    else throw std::invalid_argument("config: unknown recipe '" + r + "'");
  }
  RatioReport rep = theorem1_upper_experiment(tp, n_lo, n_hi, recipes, parse_block_opts(cfg));
  const bool pass = rep.max_ratio() <= k_max;
  char msg[160];
  std::snprintf(msg, sizeof msg, "max normalized error ratio=%.6g (bound K=%.6g)",
                rep.max_ratio(), k_max);
  return finish_ratio_report(std::move(rep), cfg, out_dir, "theorem1_upper", pass, msg);
}

} // namespace detail

/// Runs one experiment config. Never throws: errors come back as exit code 1
/// with the reason in the verdict line.
inline RunResult run_experiment(const Config& cfg) try {
  const std::string kind = cfg.get("experiment");
  const std::string out_dir = cfg.get_or("out", ".");
  if (kind == "norm") return detail::run_norm(cfg, out_dir);
  if (kind == "cross") return detail::run_cross(cfg, out_dir);
  if (kind == "block-norm") return detail::run_block_norm(cfg, out_dir);
  if (kind == "sv-check") return detail::run_sv_check(cfg, out_dir);
  if (kind == "lemma1") return detail::run_lemma1(cfg, out_dir);
  if (kind == "lemma2") return detail::run_lemma2(cfg, out_dir);
  if (kind == "theorem1-lower") return detail::run_theorem1_lower(cfg, out_dir);
  if (kind == "theorem1-upper") return detail::run_theorem1_upper(cfg, out_dir);
  throw std::invalid_argument("config: unknown experiment '" + kind + "'");
} catch (const std::exception& e) {
  RunResult res;
  res.exit_code = 1;
  res.verdict = std::string("ERROR: ") + e.what();
  return res;
}

/// Writes the (n, ratio) plot series of a report; see report_to_plotdata.
inline void emit_plotdata(const RatioReport& rep, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("emit_plotdata: cannot write '" + path + "'");
  f << report_to_plotdata(rep);
  if (!f) throw std::runtime_error("emit_plotdata: write failed for '" + path + "'");
}

} // namespace lk
