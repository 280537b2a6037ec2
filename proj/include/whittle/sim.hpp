#pragma once

#include <cstdint>
#include <vector>

#include "whittle/bandit_core.hpp"
#include "whittle/rng.hpp"

namespace whittle {

enum class PolicyKind { Whittle, Myopic, UniformRandom };

std::string to_string(PolicyKind policy);

// One multi-arm experiment: arms, starting beliefs, the index criterion used
// by the Whittle policy, which policy runs, how long, and the seed list.
struct SimConfig {
    std::vector<ArmModel> arms;
    std::vector<double> initial_beliefs;
    Criterion criterion = Criterion::discounted(0.99);
    PolicyKind policy = PolicyKind::Whittle;
    long horizon = 0;
    std::vector<std::uint64_t> seeds;

    void validate() const;
};

// True environment state. `hidden` is invisible to policies; `beliefs` is the
// policy's view and evolves only through the bandit-core updates.
struct EnvState {
    std::vector<int> hidden;
    std::vector<Belief> beliefs;
    std::vector<long> steps_since_play;
    long t = 0;
};

struct SimulationTrace {
    std::vector<int> actions;                  // chosen arm per step
    std::vector<int> rewards;                  // realized {0,1} per step
    std::vector<double> cumulative;            // running reward sum
    std::vector<std::vector<double>> beliefs;  // post-step beliefs per step
    std::vector<long> play_counts;             // per arm
};

// argmax with ties broken by the lowest index.
int argmax_tie_lowest(const std::vector<double>& values);

// Index policy: play the arm whose Whittle index at its current belief is
// largest.
int select_whittle(const std::vector<Belief>& beliefs, const std::vector<ArmModel>& arms,
                   const Criterion& criterion);

// Myopic policy: play the arm with the highest immediate expected reward.
int select_myopic(const std::vector<Belief>& beliefs, const std::vector<ArmModel>& arms);

// Samples initial hidden states with P(X=0) = initial belief. Consumes one
// draw per arm from that arm's stream.
EnvState env_init(const std::vector<ArmModel>& arms, const std::vector<double>& initial_beliefs,
                  ArmStreams& streams);

// Advances the true environment one step: the played arm pays a Bernoulli
// reward on its current hidden state and resets deterministically; rested
// arms move by their passive law; beliefs follow the matching bandit-core
// updates. Every arm consumes a fixed two draws per step (transition then
// reward) so that runs with identical seeds stay aligned regardless of the
// policy. Returns the realized reward.
int env_step(EnvState& state, const std::vector<ArmModel>& arms, int action, ArmStreams& streams);

// One full episode; deterministic given (config, seed).
SimulationTrace run_episode(const SimConfig& config, std::uint64_t seed);

// Seed-aggregated curves for one policy.
struct PolicyBatch {
    PolicyKind policy = PolicyKind::Whittle;
    std::vector<double> mean_cumulative;    // per step
    std::vector<double> stderr_cumulative;  // per step
    std::vector<double> mean_play_counts;   // per arm
    double final_mean = 0.0;
    double final_stderr = 0.0;
};

// Runs every seed for each requested policy (episodes run in parallel,
// aggregation is reduced in seed order so results are deterministic).
std::vector<PolicyBatch> run_batch(const SimConfig& config,
                                   const std::vector<PolicyKind>& policies);
PolicyBatch run_batch(const SimConfig& config);

// Random catalog in the style of the large-system experiments:
// rho0 = 0.01 + 0.19 u, rho1 = 0.6 + 0.3 u, p = 0.01 + 0.29 u with
// independent uniforms per arm and field. The first n - n_type_b arms are
// TypeA, the rest TypeB.
std::vector<ArmModel> generate_random_arms(int n, int n_type_b, std::uint64_t seed);

}  // namespace whittle
