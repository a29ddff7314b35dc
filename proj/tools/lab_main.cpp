#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "cli_common.hpp"
#include "fraclab/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fraclab experiment runner"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "enumerate experiment suites");

  std::string suite, config_path, out_dir;
  std::uint64_t seed = 0;
  int workers = 0;
  std::vector<std::string> overrides;
  bool have_seed = false, have_workers = false;
  auto* run = app.add_subcommand("run", "run a suite by id");
  run->add_option("suite", suite, "suite id (see `lab list`)")->required();
  run->add_option("--config", config_path, "key=value or JSON config file");
  run->add_option("--seed", seed, "base seed")->each([&](const std::string&) {
    have_seed = true;
  });
  run->add_option("--workers", workers, "worker threads (0 = auto)")
      ->each([&](const std::string&) { have_workers = true; });
  run->add_option("--out", out_dir, "output directory for report and CSV tables");
  run->add_option("--set", overrides, "extra key=value overrides")
      ->take_all();

  CLI11_PARSE(app, argc, argv);

  if (*list) {
    for (const auto& id : fraclab::list_suites()) std::printf("%s\n", id.c_str());
    return 0;
  }

  try {
    fraclab::ConfigMap cfg;
    if (!config_path.empty()) cfg = fraclab::ConfigMap::from_file(config_path);
    for (const auto& kv : overrides) {
      const auto pos = kv.find('=');
      if (pos == std::string::npos) {
        std::fprintf(stderr, "bad --set override (expected key=value): %s\n",
                     kv.c_str());
        return 2;
      }
      cfg.set(kv.substr(0, pos), kv.substr(pos + 1));
    }
    if (have_seed) cfg.set("seed", std::to_string(seed));
    if (have_workers) cfg.set("workers", std::to_string(workers));
    const auto rep = fraclab::run_experiment(suite, cfg, out_dir);
    return fraclab::cli::finish(rep, out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
