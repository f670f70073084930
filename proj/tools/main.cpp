#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pwl/config.hpp"
#include "pwl/run.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read config: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"piecewise-linear map toolkit: orbits, return maps, rotation numbers, "
               "attractor classification, parameter scans"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_path;
  int threads = 1;
  std::uint64_t seed_value = 0;
  bool seed_set = false;
  app.add_option("--config", config_path, "run configuration file (key = value)")
      ->required();
  app.add_option("--out", out_path, "output artifact path (CSV or PPM)");
  app.add_option("--threads", threads, "worker threads for scans")->default_val(1);
  app.add_option("--seed", seed_value, "override the config seed")
      ->each([&seed_set](const std::string&) { seed_set = true; });

  for (const char* name : {"orbit", "classify", "return-map", "rotation", "scan1d", "scan2d",
                           "basin", "critical-images"})
    app.add_subcommand(name);

  CLI11_PARSE(app, argc, argv);

  pwl::RunOptions ro;
  ro.command = app.get_subcommands().front()->get_name();
  ro.out = out_path;
  ro.threads = threads;
  if (seed_set) ro.seed = seed_value;

  try {
    const pwl::RunConfig cfg = pwl::parse_config(read_file(config_path));
    return pwl::run_command(cfg, ro, std::cout, std::cerr);
  } catch (const pwl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
