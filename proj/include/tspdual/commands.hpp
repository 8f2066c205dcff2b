#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tspdual/dual.hpp"

namespace tspdual {

// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitCounterexample = 10;

struct CommandOptions {
  std::optional<std::filesystem::path> instance;
  std::optional<std::filesystem::path> config;
  std::filesystem::path out = ".";
  std::optional<std::uint64_t> seed;
  // Size of the generated Euclidean instance when no --instance is given.
  int random_n = 4;
};

struct GapRecord {
  std::string instance_id;
  int n = 0;
  std::uint64_t seed = 0;
  double oracle_optimum = 0.0;
  double dual_bound = 0.0;
  double gap = 0.0;
  int iterations = 0;
  Termination termination = Termination::IterationCap;
  Verdict verdict = Verdict::NotDualFeasible;
};

// Mixes (seed, a, b) into a 64-bit instance seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

// Each command writes its artifacts under opts.out, reports progress on
// log, and returns a process exit code. Input problems raise Error or
// nlohmann::json::parse_error; run_command maps those to kExitInputError.
int cmd_formulate(const CommandOptions& opts, std::ostream& log);
int cmd_reduce(const CommandOptions& opts, std::ostream& log);
int cmd_dual(const CommandOptions& opts, std::ostream& log);
int cmd_inverse(const CommandOptions& opts, std::ostream& log);
int cmd_experiment(const CommandOptions& opts, std::ostream& log);

int run_command(const std::string& name, const CommandOptions& opts,
                std::ostream& log, std::ostream& err);

}  // namespace tspdual
