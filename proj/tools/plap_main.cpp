#include <cstdio>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "plap/cli.hpp"
#include "plap/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "plap: classify and numerically construct the bounded nonnegative\n"
      "one-dimensional profiles of -(|u'|^{p-2}u')' = f(u), and run the\n"
      "companion variational solvers on balls and strips."};

  std::string config_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool verbose = false;
  app.add_option("--config", config_path, "run configuration document (JSON)")
      ->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "override the configured random seed");
  app.add_flag("--verbose", verbose, "progress notes on stderr");
  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream is(config_path);
    if (!is) {
      std::fprintf(stderr, "error: cannot open config %s\n", config_path.c_str());
      return plap::cli::exit_config;
    }
    plap::io::json doc = plap::io::json::parse(is);
    plap::io::RunConfig cfg = plap::io::parse_config(doc);
    return plap::cli::run(cfg, out_dir, seed, verbose);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return plap::cli::exit_config;
  }
}
