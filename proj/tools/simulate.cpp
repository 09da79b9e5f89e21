// SPDX-License-Identifier: Apache-2.0
//
// simulate <recipe> --config <file> --out <dir> --seed <u64> [--desk-scale] [--threads n]
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qmimo/config.hpp"
#include "qmimo/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quantized-precoding MU-MIMO-OFDM downlink experiments"};
  std::string recipe;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 1;
  bool desk = false;
  int threads = 1;
  app.add_option("recipe", recipe, "psd | radiation | ber | tradeoff")
      ->required()
      ->check(CLI::IsMember(qmimo::recipe_names()));
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_option("--seed", seed, "master seed")->required();
  app.add_flag("--desk-scale", desk, "B = 16 and at most 20 realizations");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  qmimo::ExperimentConfig config;
  try {
    config = qmimo::load_config(config_path);
    if (desk) config = qmimo::desk_scale(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    const auto files = qmimo::run_recipe(recipe, config, {seed, threads}, out_dir);
    for (const auto& f : files) std::cout << f.string() << '\n';
  } catch (const qmimo::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
