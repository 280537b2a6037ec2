#pragma once

#include <optional>
#include <string>

namespace whittle {

// Two user-preference dynamics. TypeA ("normal"): playing resets the user to
// the low-preference state and interest recovers while the arm rests.
// TypeB ("viral"): playing resets to the high-preference state and interest
// decays while the arm rests.
enum class ArmKind { TypeA, TypeB };

// Base: rested arms move one way only (rate p). DualSpeedZero: rested arms
// move both ways (rates p and q) while play still resets deterministically.
enum class ModelVariant { Base, DualSpeedZero };

std::string to_string(ArmKind kind);
std::string to_string(ModelVariant variant);

// Reward criterion for values and indices: discounted with beta in (0,1), or
// long-run average reward.
struct Criterion {
    bool average = false;
    double beta = 0.0;  // meaningful only when !average

    static Criterion discounted(double beta);
    static Criterion average_reward() { return Criterion{true, 0.0}; }
};

// Probability that the hidden state is 0 (the low-reward state). Kept clamped
// to [0,1]; updates below never leave the interval apart from rounding.
struct Belief {
    double pi = 0.0;
};

inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

// One arm: kind, passive transition rate(s) and the two reward probabilities.
// rho0/rho1 are the success probabilities of a play in hidden state 0/1.
//
// Validation enforces open-interval ranges and p + q <= 1 for the dual-speed
// variant. rho0 < rho1 is the standard ordering assumed by the threshold and
// index theory; exotic arms with rho0 >= rho1 can still be constructed for
// simulation (the index formulas are evaluated formally in that case).
struct ArmModel {
    ArmKind kind = ArmKind::TypeA;
    ModelVariant variant = ModelVariant::Base;
    double p = 0.0;
    double q = 0.0;  // DualSpeedZero only
    double rho0 = 0.0;
    double rho1 = 0.0;

    static ArmModel base(ArmKind kind, double p, double rho0, double rho1);
    static ArmModel dual_speed_zero(ArmKind kind, double p, double q, double rho0, double rho1);

    void validate() const;  // throws std::invalid_argument
    bool standard_reward_order() const { return rho0 < rho1; }
};

// rho(pi) = pi*rho0 + (1-pi)*rho1, the expected reward of playing at belief pi.
double expected_reward(const ArmModel& model, Belief belief);

// Belief update when the arm rests.
//   Base TypeA:    pi' = (1-p) pi
//   Base TypeB:    pi' = pi + p (1-pi)
//   DualSpeedZero: pi' = gamma(pi) = pi (1-p) + (1-pi) q   (both kinds)
Belief belief_step_passive(const ArmModel& model, Belief belief);

// Belief update when the arm is played: the reset is deterministic, so the
// observed reward does not enter. TypeA -> 1, TypeB -> 0.
Belief belief_step_active(const ArmModel& model, Belief belief);

// Fixed point q/(p+q) of the dual-speed passive map. Rejects Base models.
double gamma_infinity(const ArmModel& model);

// K(pi, pi_t) = min{ k >= 0 : passive^k(pi) < pi_t }, count of rest steps
// until the belief falls strictly below pi_t. nullopt means no finite k works
// (e.g. Base with pi_t = 0, or dual-speed with pi >= pi_t and pi_t <= gamma
// infinity). Computed by direct iteration; that definition is authoritative,
// the floor/log closed form is only cross-checked in tests.
std::optional<long> waiting_time(const ArmModel& model, Belief pi, double pi_t);

// waiting_time plus the belief reached at the crossing step. When the wait is
// infinite, `iterate` holds the fixed point the iterates stalled at.
struct PassiveCrossing {
    std::optional<long> k;
    double iterate = 0.0;
};
PassiveCrossing passive_crossing(const ArmModel& model, Belief pi, double pi_t);

// Subsidy interval [lambda_low, lambda_high] outside which the single-arm
// problem is degenerate: below lambda_low playing is optimal for every
// belief, above lambda_high idling is.
struct SubsidyRange {
    double lambda_low = 0.0;
    double lambda_high = 0.0;
};
SubsidyRange subsidy_bounds(const ArmModel& model, const Criterion& criterion);

}  // namespace whittle
