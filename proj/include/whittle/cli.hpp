#pragma once

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "whittle/config.hpp"

namespace whittle::cli {

// Exit-code contract: 0 success, 1 verification failure, 2 usage/config error.
constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;

// Prints a table of Whittle indices W(pi) per arm with regime tags; also
// writes it as CSV when csv_path is given.
int cmd_index(const ExperimentConfig& config, const std::vector<double>& pis,
              const std::string& csv_path, std::ostream& out);

// Prints the value-iteration solution for one arm and subsidy: threshold,
// subsidy bounds and a subsampled table, with the closed-form comparison.
int cmd_value(const ExperimentConfig& config, int arm_index, double lambda, int grid_size,
              std::ostream& out);

// Runs the configured policies across all seeds; writes per-step rows and the
// summary CSVs, optionally an SVG chart of the mean cumulative curves.
int cmd_simulate(const ExperimentConfig& config, std::ostream& out);

// Thompson-sampling runs; writes per-seed step rows plus seed-averaged regret
// and posterior-mass series.
int cmd_learn(const ExperimentConfig& config, std::ostream& out);

// Seeded verification suites. `full` selects the acceptance-sized battery;
// the default battery is reduced for interactive use.
int cmd_verify(const std::string& suite, bool full, std::ostream& out);

}  // namespace whittle::cli
