#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "avekit/config.hpp"

namespace avekit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;     // bad config / input / precondition
inline constexpr int kExitNumerical = 3;  // singular matrix, step underflow, step limit
inline constexpr int kExitProperty = 4;   // a verified property was violated

struct CliOptions {
    std::string config_path;
    std::optional<std::string> out_dir;    // overrides [output] dir
    std::optional<std::uint64_t> seed;     // overrides [problem] seed
    MuConvention convention = MuConvention::Table;
};

int run_solve(const CliOptions& cli);
int run_tmax(const CliOptions& cli);
int run_compare(const CliOptions& cli);
int run_verify(const CliOptions& cli);

/// Parallelism cap: AVEKIT_THREADS when set, hardware concurrency otherwise.
std::size_t thread_cap();

/// Problem construction from a [problem] section (tridiag | random | file).
AveProblem build_problem(const ProblemSpec& spec);

} // namespace avekit
