#pragma once

#include <cstdint>
#include <vector>

#include "whittle/bandit_core.hpp"
#include "whittle/sim.hpp"

namespace whittle {

// One candidate parameterization of an arm whose kind is known.
struct Candidate {
    double p = 0.0;
    double rho0 = 0.0;
    double rho1 = 0.0;
};

// Belief after k rest steps since the last reset (or since the start, with
// pi_ref the configured initial belief). TypeA: (1-p)^k pi_ref with
// pi_ref = 1 after a play; TypeB: 1 - (1-p)^k (1-pi_ref) with pi_ref = 0
// after a play.
Belief derived_belief(ArmKind kind, double p_hat, long k, double pi_ref);

// Probability of the observed reward when playing an arm that rested k steps
// since its last deterministic reset:
//   TypeA: f = (1-p)^k rho0 + (1-(1-p)^k) rho1
//   TypeB: f = (1-(1-p)^k) rho0 + (1-p)^k rho1
// returned as f for r = 1 and 1-f for r = 0. k = 0 means the arm was played
// on the previous step. pi_ref generalizes the formulas to arms that have
// never been played (it defaults to the post-play reset belief).
double likelihood(ArmKind kind, const Candidate& theta, long k, int reward);
double likelihood(ArmKind kind, const Candidate& theta, long k, int reward, double pi_ref);

// Discrete posterior over one arm's candidate grid. Weights are held in
// log-space and renormalized after every update.
struct ArmPosterior {
    std::vector<double> log_weights;
    int sampled = 0;  // currently sampled candidate index

    std::vector<double> weights() const;
    void normalize();
};

// Bayes step for the played arm: multiply each candidate weight by its reward
// likelihood and renormalize. Throws when every candidate's likelihood
// underflows to zero (impossible for candidates strictly inside (0,1)).
void posterior_update(ArmPosterior& posterior, ArmKind kind,
                      const std::vector<Candidate>& grid, long k, int reward, double pi_ref);

struct LearningConfig {
    std::vector<ArmModel> true_arms;          // the hidden environment
    std::vector<std::vector<Candidate>> grids;  // per arm
    std::vector<std::vector<double>> prior;   // per arm; empty = uniform
    Criterion criterion = Criterion::discounted(0.99);
    PolicyKind base_policy = PolicyKind::Whittle;
    long horizon = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<double> initial_beliefs;  // empty = all 1
    bool resample_all = false;            // ablation: resample every arm each step

    void validate() const;
    // index of the candidate equal to the true parameters, per arm
    std::vector<int> true_candidate_indices() const;
};

struct LearningTrace {
    SimulationTrace trace;
    std::vector<std::vector<double>> mass_on_true;  // [step][arm]
    std::vector<long> mismatch_cum;                 // steps with any wrong sample
};

// Thompson-sampling run: per step, derive each arm's belief under its
// currently sampled candidate, pick an arm with the base policy, observe the
// true environment's reward, Bayes-update the played arm's posterior and
// resample its candidate. Environment randomness is drawn exactly as in
// run_episode, so a run against the true parameters with the same seed is
// coupled draw-for-draw.
LearningTrace run_learning(const LearningConfig& config, std::uint64_t seed);

struct LearningReport {
    std::vector<double> mean_learner_cum;
    std::vector<double> mean_oracle_cum;   // base policy with true parameters
    std::vector<double> mean_random_cum;   // uniform-random baseline
    std::vector<double> regret_vs_oracle;  // mean oracle - mean learner
    std::vector<double> mean_mismatch;     // mean cumulative mismatch counter
    std::vector<std::vector<double>> mean_mass_on_true;  // [step][arm]
};

LearningReport learning_report(const LearningConfig& config);

}  // namespace whittle
