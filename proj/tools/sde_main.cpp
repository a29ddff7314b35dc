#include <CLI11.hpp>
#include <cstdio>
#include <map>
#include <string>

#include "cli_common.hpp"
#include "fraclab/harness.hpp"

namespace {

struct Flags {
  std::map<std::string, std::string> keys;   // set only when the flag was used
  std::string out_dir;
};

void add_common(CLI::App* cmd, Flags& f) {
  auto bind = [&f, cmd](const std::string& flag, const std::string& key,
                        const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [&f, key](const std::string& v) { f.keys[key] = v; }, help);
  };
  bind("--hurst", "hurst", "Hurst index in (0, 1/2]");
  bind("--alpha", "alpha", "declared drift regularity override");
  bind("--drift", "drift", "drift catalog id");
  bind("--n-moll", "n_moll", "mollification level n");
  bind("--lambda", "lambda", "comma-separated lambda grid");
  bind("--paths", "paths", "ensemble size");
  bind("--steps", "steps", "time steps on [0,1]");
  bind("--seed", "seed", "base seed");
  bind("--workers", "workers", "worker threads (0 = auto)");
  cmd->add_option("--out", f.out_dir, "output directory");
}

int dispatch(const std::string& suite, const Flags& f,
             const std::map<std::string, std::string>& extra = {}) {
  try {
    fraclab::ConfigMap cfg;
    for (const auto& [k, v] : f.keys) cfg.set(k, v);
    for (const auto& [k, v] : extra) cfg.set(k, v);
    const auto rep = fraclab::run_experiment(suite, cfg, f.out_dir);
    return fraclab::cli::finish(rep, f.out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SDEs with distributional drift driven by fractional noise"};
  app.require_subcommand(1);
  Flags f;

  auto* solve = app.add_subcommand("solve", "Euler ensemble under a mollified drift");
  add_common(solve, f);
  double x0 = 0.0;
  bool have_x0 = false;
  solve->add_option("--x0", x0, "initial condition")->each([&](const std::string&) {
    have_x0 = true;
  });

  auto* couple = app.add_subcommand("couple", "coupling contraction across lambda");
  add_common(couple, f);
  std::string g_moll;
  couple->add_option("--g-moll", g_moll, "comparison mollification level");

  auto* scaling = app.add_subcommand("scaling", "regularization scaling experiments");
  add_common(scaling, f);
  std::string kind = "lambda";
  scaling->add_option("--kind", kind, "lambda (exp weight) or time (occupation)")
      ->check(CLI::IsMember({"lambda", "time"}));

  auto* weak = app.add_subcommand("weak-cauchy", "same-noise weak-convergence gaps");
  add_common(weak, f);

  auto* minc = app.add_subcommand("min-construction", "pointwise-min residuals (d=1)");
  add_common(minc, f);

  CLI11_PARSE(app, argc, argv);

  if (*solve) {
    std::map<std::string, std::string> extra;
    if (have_x0) extra["x0"] = std::to_string(x0);
    return dispatch("sde-solve", f, extra);
  }
  if (*couple) {
    std::map<std::string, std::string> extra;
    if (!g_moll.empty()) extra["g_moll"] = g_moll;
    return dispatch("sde-coupling-contraction", f, extra);
  }
  if (*scaling)
    return dispatch(kind == "time" ? "occupation-scaling" : "exp-weight-scaling", f);
  if (*weak) return dispatch("sde-weak-cauchy", f);
  if (*minc) return dispatch("min-construction", f);
  return 2;
}
