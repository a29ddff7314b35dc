#include <CLI11.hpp>
#include <cstdio>
#include <map>
#include <string>

#include "cli_common.hpp"
#include "fraclab/harness.hpp"

namespace {

struct Flags {
  std::map<std::string, std::string> keys;
  std::string out_dir;
};

void add_common(CLI::App* cmd, Flags& f) {
  auto bind = [&f, cmd](const std::string& flag, const std::string& key,
                        const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [&f, key](const std::string& v) { f.keys[key] = v; }, help);
  };
  bind("--bc", "bc", "boundary condition: periodic or neumann");
  bind("--modes", "modes", "retained spectral modes");
  bind("--alpha", "alpha", "declared drift regularity override");
  bind("--drift", "drift", "drift catalog id");
  bind("--n-moll", "n_moll", "mollification level n");
  bind("--lambda", "lambda", "comma-separated lambda grid");
  bind("--paths", "fields", "ensemble size (fields)");
  bind("--steps", "steps", "time steps on [0,1]");
  bind("--seed", "seed", "base seed");
  bind("--workers", "workers", "worker threads (0 = auto)");
  cmd->add_option("--out", f.out_dir, "output directory");
}

int dispatch(const std::string& suite, const Flags& f) {
  try {
    fraclab::ConfigMap cfg;
    for (const auto& [k, v] : f.keys) cfg.set(k, v);
    const auto rep = fraclab::run_experiment(suite, cfg, f.out_dir);
    return fraclab::cli::finish(rep, f.out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic heat equation with distributional drift"};
  app.require_subcommand(1);
  Flags f;

  auto* conv = app.add_subcommand("convolution", "stochastic convolution law checks");
  add_common(conv, f);
  auto* solve = app.add_subcommand("solve", "mild-solution ensemble");
  add_common(solve, f);
  auto* couple = app.add_subcommand("couple", "field coupling across lambda");
  add_common(couple, f);
  auto* scaling = app.add_subcommand("scaling", "exponential-weight lambda scaling");
  add_common(scaling, f);
  auto* weak = app.add_subcommand("weak-cauchy", "weighted-norm weak-convergence gaps");
  add_common(weak, f);

  CLI11_PARSE(app, argc, argv);

  if (*conv) return dispatch("she-convolution", f);
  if (*solve) return dispatch("she-solve", f);
  if (*couple) return dispatch("she-coupling", f);
  if (*scaling) return dispatch("she-lambda-scaling", f);
  if (*weak) return dispatch("she-weak-cauchy", f);
  return 2;
}
