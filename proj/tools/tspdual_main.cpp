// tspdual: build the QP encoding of a TSP instance, its reduced form and
// classic Lagrangian dual, and search the inverse optimality conditions.
//
//   tspdual formulate  --instance inst.json --out dir
//   tspdual reduce     --instance inst.json --out dir
//   tspdual dual       --instance inst.json [--config ascent.json] --out dir
//   tspdual inverse    [--config search.json] [--seed 0] --out dir
//   tspdual experiment [--config sweep.json] [--seed 0] --out dir
//
// Without --instance, a random Euclidean instance of --random-n cities is
// generated from --seed. Exit codes: 0 ok, 2 input error, 10 counterexample.

#include <iostream>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "tspdual/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Lagrangian dual laboratory for the TSP quadratic program"};
  app.require_subcommand(1);

  tspdual::CommandOptions opts;
  std::string instance, config, out = ".";
  std::uint64_t seed = 0;

  const std::pair<const char*, const char*> commands[] = {
      {"formulate", "write A, C, D and an oracle summary"},
      {"reduce", "write the reduced problem (A_r, b_r, E_r, c0)"},
      {"dual", "run dual ascent, verify the point, record the gap"},
      {"inverse", "multistart search for a dual-feasible instance"},
      {"experiment", "duality gaps over random Euclidean instances"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--instance", instance, "instance JSON file");
    sub->add_option("--config", config, "config JSON file");
    sub->add_option("--out", out, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--random-n", opts.random_n,
                    "cities in the generated instance when --instance is absent")
        ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : tspdual::kExitInputError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  if (!instance.empty()) opts.instance = instance;
  if (!config.empty()) opts.config = config;
  if (sub->count("--seed") > 0) opts.seed = seed;
  opts.out = out;

  return tspdual::run_command(sub->get_name(), opts, std::cout, std::cerr);
}
