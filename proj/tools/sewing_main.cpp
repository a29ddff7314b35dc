#include <CLI11.hpp>
#include <cstdio>
#include <map>
#include <string>

#include "cli_common.hpp"
#include "fraclab/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"sewing-lemma germ integrators"};
  app.require_subcommand(1);

  std::map<std::string, std::string> keys;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "dyadic refinement of a germ");
  auto bind = [&](const std::string& flag, const std::string& key,
                  const std::string& help) {
    run->add_option_function<std::string>(
        flag, [&keys, key](const std::string& v) { keys[key] = v; }, help);
  };
  bind("--germ", "germ", "additive | quadratic | drift");
  bind("--hurst", "hurst", "Hurst index for the drift germ");
  bind("--alpha", "alpha", "declared drift regularity override");
  bind("--levels", "levels", "maximum dyadic level");
  bind("--steps", "steps", "path grid steps (drift germ)");
  bind("--n-moll", "n_moll", "mollification level (drift germ)");
  bind("--seed", "seed", "base seed");
  run->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    fraclab::ConfigMap cfg;
    for (const auto& [k, v] : keys) cfg.set(k, v);
    const auto rep = fraclab::run_experiment("sewing-run", cfg, out_dir);
    return fraclab::cli::finish(rep, out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
