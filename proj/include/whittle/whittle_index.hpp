#pragma once

#include <optional>
#include <string>
#include <vector>

#include "whittle/bandit_core.hpp"
#include "whittle/value_functions.hpp"

namespace whittle {

// A Whittle index value: the smallest subsidy making idling optimal at the
// given belief, plus the regime/waiting-count metadata used to compute it.
struct IndexResult {
    double w = 0.0;
    Criterion criterion;
    std::string regime;
    std::optional<long> waiting_k;  // K(1, pi) where the formula uses it
};

// Closed-form discounted Whittle index.
//   Base TypeA:  rho1 + beta^(K+1)(rho0-rho1)(1-p)^K
//                + (rho0-rho1)/(1-beta) (1-beta^(K+1)) (1-beta(1-p)) pi,  K = K(1,pi)
//   Base TypeB:  rho1 + (1-beta)(rho0-rho1) pi   (rho1 at pi = 0)
//   Dual TypeA:  rho(pi) while the wait from belief 1 is infinite (pi <= gamma_inf),
//                else rho1 + beta^(K+1)(rho0-rho1) gamma^K(1)
//                + (rho0-rho1)/(1-beta) (1-beta^(K+1)) (pi - beta gamma(pi))
//   Dual TypeB:  (1-beta) rho(pi) + beta rho1 on [0, gamma_inf], where rests
//                only hurt; rho(pi) - beta rho(gamma(pi)) + beta rho1 above
//                gamma_inf, where the indifferent policy rests exactly once
// The TypeA value at pi = 0 is the continuity limit rho1.
IndexResult index_discounted(const ArmModel& model, double beta, Belief pi);

// Closed-form average-reward Whittle index (vanishing-discount limit of the
// discounted formulas):
//   Base TypeA:  rho1 + (rho0-rho1)(1-p)^K + (K+1) p (rho0-rho1) pi
//   Base TypeB:  rho1
//   Dual TypeA:  rho(pi) below gamma_inf, else
//                rho1 + (rho0-rho1) gamma^K(1) + (K+1)(rho0-rho1)(pi - gamma(pi))
//   Dual TypeB:  rho1 on [0, gamma_inf]; rho1 + (rho0-rho1)(pi - gamma(pi)) above
IndexResult index_average(const ArmModel& model, Belief pi);

struct OracleOptions {
    int grid_size = 2001;
    double lambda_tol = 1e-5;
    double vi_tol = 1e-9;
    double bracket_pad = 0.1;  // beyond [lambda_low, lambda_high]
};

enum class OracleStatus { Crossed, NoCrossing };

struct OracleIndex {
    OracleStatus status = OracleStatus::Crossed;
    double w = 0.0;
};

// Independent index oracle: bisects the subsidy over the padded range,
// solving the dynamic program at each step and tracking the sign of
// v_play(pi) - v_idle(pi), which is decreasing in lambda. NoCrossing means
// the sign never flips across the bracket.
OracleIndex index_oracle(const ArmModel& model, double beta, Belief pi,
                         const OracleOptions& options = {});

// Same oracle on a caller-owned solver; consecutive queries against one model
// warm-start from the previous subsidy's table.
OracleIndex index_oracle(ValueIterationSolver& solver, Belief pi, const OracleOptions& options);

// Indexability audit: sweeps the subsidy uniformly over
// [lambda_low, lambda_high] and checks that the optimal threshold is
// non-increasing in lambda. A strictly increasing adjacent pair beyond one
// grid spacing is a FAIL verdict (not an exception).
struct IndexabilityReport {
    std::vector<double> lambdas;
    std::vector<double> thresholds;  // AlwaysPlay -> 1, NeverPlay -> 0
    bool pass = true;
    double worst_increase = 0.0;
};

IndexabilityReport indexability_audit(const ArmModel& model, double beta, int lambda_points,
                                      int grid_size = 2001, double vi_tol = 1e-10);

}  // namespace whittle
