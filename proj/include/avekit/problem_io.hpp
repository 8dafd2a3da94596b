#pragma once

#include <string>
#include <vector>

#include "avekit/ode.hpp"
#include "avekit/problem.hpp"

namespace avekit {

/// Shortest decimal form that reloads to the identical double (%.17g).
std::string format_full(double v);

/// Structured text document: magic line, key = value metadata, then the
/// whitespace-separated blocks "A:", "b:" and (optionally) "xstar:".
void save_problem(const AveProblem& p, const std::string& path);
AveProblem load_problem(const std::string& path);

/// Comma-separated trajectory table with header row. Columns: t, V (only for
/// runs with an energy probe), r_norm (only with a residual probe), then
/// x_1..x_n. All values at 17 significant digits, so a reload is bit-exact.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};
CsvTable load_csv(const std::string& path);

} // namespace avekit
