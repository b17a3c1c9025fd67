#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nilmult/commands.hpp"
#include "nilmult/special.hpp"

int main(int argc, char **argv) {
  CLI::App app{"Spectral multiplier kernels on N_{3,2}"};
  app.set_version_flag("--version", std::string(NILMULT_VERSION));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir, method;
  std::optional<std::uint64_t> seed;
  std::optional<double> grid_scale;
  std::optional<int> threads;
  double fault = 0.0;

  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "seed for randomized checks");
  app.add_option("--grid-scale", grid_scale, "multiplies the grid resolution")
      ->check(CLI::PositiveNumber);
  app.add_option("--method", method, "closed_transverse or direct6d")
      ->check(CLI::IsMember({"closed_transverse", "direct6d"}));
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  // Test hook: perturbs the Laguerre recurrence by this relative amount.
  app.add_option("--fault-laguerre", fault)->group("");

  for (const char *verb : {"verify", "kernel", "scaling", "norms"})
    app.add_subcommand(verb)->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    nilmult::ExperimentConfig cfg;
    if (!config_path.empty())
      cfg = nilmult::load_config(config_path);
    cfg.experiment = app.get_subcommands().front()->get_name();
    if (out_dir)
      cfg.output = *out_dir;
    if (seed)
      cfg.seed = *seed;
    if (grid_scale)
      cfg.grid.scale *= *grid_scale;
    if (method)
      cfg.method = nilmult::parse_method(*method);
    if (threads)
      cfg.threads = *threads;
    cfg.validate();
    if (fault != 0.0)
      nilmult::testing::set_laguerre_fault(fault);

    std::cerr << "config " << nilmult::config_hash(cfg) << " seed " << cfg.seed << '\n';
    const nilmult::CommandResult res = nilmult::run_experiment(cfg, std::cerr);
    for (const auto &f : res.files)
      std::cout << f.string() << '\n';
    return res.exit_code;
  } catch (const nilmult::ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
