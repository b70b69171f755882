// lklab: numerical laboratory for anisotropic Lorentz-Karamata approximation.
// Each subcommand runs one experiment described by a flat key=value config;
// artifacts are CSV (plus a plot series for ratio experiments).
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "lk/config.hpp"
#include "lk/driver.hpp"

namespace {

constexpr const char* kExperiments[] = {"norm",   "cross",  "block-norm",     "sv-check",
                                        "lemma1", "lemma2", "theorem1-lower", "theorem1-upper"};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"lklab: hyperbolic-cross approximation experiments in anisotropic "
               "Lorentz-Karamata spaces"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string window;
  int grid = 0;

  for (const char* name : kExperiments) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_path, "experiment config file")->required();
    sub->add_option("--out", out_dir, "artifact output directory");
    sub->add_option("--window", window, "override window a:b");
    sub->add_option("--grid", grid, "override per-axis grid size");
  }

  CLI11_PARSE(app, argc, argv);

  lk::RunResult result;
  try {
    lk::Config cfg = lk::Config::load(config_path);
    const std::string sub = app.get_subcommands().front()->get_name();
    if (cfg.has("experiment") && cfg.get("experiment") != sub) {
      std::fprintf(stderr, "ERROR: config experiment '%s' does not match subcommand '%s'\n",
                   cfg.get("experiment").c_str(), sub.c_str());
      return 1;
    }
    cfg.set("experiment", sub);
    if (!out_dir.empty()) cfg.set("out", out_dir);
    if (!window.empty()) cfg.set("window", window);
    if (grid > 0) cfg.set("grid", std::to_string(grid));
    result = lk::run_experiment(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ERROR: %s\n", e.what());
    return 1;
  }

  std::printf("%s\n", result.verdict.c_str());
  for (const auto& a : result.artifacts) std::printf("artifact: %s\n", a.c_str());
  return result.exit_code;
}
