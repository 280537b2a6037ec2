#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "whittle/bandit_core.hpp"

namespace whittle::verify {

enum class Family { BaseA, BaseB, DualA, DualB };

std::string to_string(Family family);

// Seeded random standard-order models: p in [0.05, 0.45],
// q in [0.05, 1 - p - 0.05], rho0 in [0.02, 0.3], rho1 in [0.5, 0.95].
std::vector<ArmModel> battery(Family family, int count, std::uint64_t seed);

struct Options {
    int models_per_family = 50;
    std::uint64_t battery_seed = 0xBA77E21;
    int grid_size = 2001;
    double lambda_tol = 1e-5;
    std::vector<double> betas = {0.5, 0.9, 0.99};
    int threshold_lambda_points = 20;
    int audit_lambda_points = 50;
    // experiment reproductions
    int five_arm_seeds = 100;
    long five_arm_horizon = 800;
    int large_n_seeds = 30;
    long large_n_horizon = 800;
    std::uint64_t catalog_seed = 1;
    int learn_seeds = 20;
    long learn_horizon = 5000;

    static Options quick();  // reduced battery for interactive checks
};

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double cpu_seconds = 0.0;  // summed single-core work
};

// The numbered acceptance checks. Each prints nothing; callers render the
// results.
CheckResult check_oracle_agreement(const Options& options);    // 1
CheckResult check_threshold_structure(const Options& options); // 2
CheckResult check_indexability(const Options& options);        // 3
CheckResult check_value_bounds(const Options& options);        // 4
CheckResult check_vanishing_discount(const Options& options);  // 5
CheckResult check_five_arm_catalogs(const Options& options);   // 6
CheckResult check_large_catalog_trend(const Options& options); // 7
CheckResult check_learning(const Options& options);            // 8
CheckResult check_core_identities(const Options& options);     // 9

std::vector<CheckResult> run_criterion(int number, const Options& options);
std::vector<CheckResult> run_all(const Options& options);

}  // namespace whittle::verify
