#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "sparseclass/experiments.hpp"

namespace sparseclass {

inline constexpr const char* kToolVersion = "0.1.0";

// Process exit codes: 0 success, 2 configuration/validation error,
// 3 statistical degeneracy (all points censored or degenerate grid).
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDegenerate = 3;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flags shared by every subcommand; unset fields fall back to the config
// file (where one exists), then to the environment, then to defaults.
struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<double> confidence;
    std::string out_dir;  // empty: no files written
    bool log10 = false;
};

// Flat key=value config with repeated `grid = m N n` lines.
SweepConfig load_sweep_config(const std::string& path);

// Threads resolution order: --threads flag, then SPARSECLASS_THREADS,
// then the config value, then auto (hardware concurrency).
unsigned resolve_threads(const std::optional<unsigned>& flag, unsigned config_value);

struct ExactArgs {
    std::string which;  // A | B | Cn | distinct
    std::uint64_t m = 0;
    std::uint64_t N = 0;
    std::uint64_t n = 0;
    std::uint64_t s = 0;  // excluded support size for B
    double epsilon = 0.0;
    std::string dist_path;  // optional distribution file for `distinct`
};

struct BoundsArgs {
    double epsilon = 0.0;
    double c_bar = 1.0;
    std::uint64_t N = 0;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::string gamma = "optimize";  // numeric value or "optimize"
    std::string pi_path;             // optional file overrides
    std::string mu_path;
    std::string nu_path;
    std::string nu_choice = "pi";  // pi | mu | uniform
};

struct CounterexampleArgs {
    std::uint64_t m = 0;
    std::uint64_t N = 0;
    std::uint64_t n = 0;
    std::uint64_t trials = 0;
    double epsilon = 0.0;
};

int cmd_simulate(const std::string& config_path, const CliOverrides& overrides);
int cmd_sweep(const std::string& config_path, const CliOverrides& overrides);
int cmd_exact(const ExactArgs& args, const CliOverrides& overrides);
int cmd_bounds(const BoundsArgs& args, const CliOverrides& overrides);
int cmd_counterexample(const CounterexampleArgs& args, const CliOverrides& overrides);

}  // namespace sparseclass
