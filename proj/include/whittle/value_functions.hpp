#pragma once

#include <vector>

#include "whittle/bandit_core.hpp"

namespace whittle {

// Converged single-arm value table under subsidy lambda on a uniform belief
// grid. v[i] = max(v_play[i], v_idle[i]) by construction.
struct ValueTable {
    std::vector<double> grid;
    std::vector<double> v;
    std::vector<double> v_play;
    std::vector<double> v_idle;
    double beta = 0.0;
    double lambda = 0.0;
    int sweeps = 0;

    double interpolate(double pi) const;  // linear interpolation of v
};

// Play/idle branch values at one belief.
struct PlayIdle {
    double v_play = 0.0;
    double v_idle = 0.0;
};

// Grid value iteration for the single-arm subsidy problem. The Bellman
// operator is
//   v_play(pi) = rho(pi) + beta V(reset belief)
//   v_idle(pi) = lambda  + beta V(passive belief)   (linear interpolation)
//   V = max(v_play, v_idle)
// iterated until the sup-norm change drops below tol. The operator is a
// beta-contraction, so failing to converge within the analytic iteration cap
// is an internal defect and throws.
class ValueIterationSolver {
  public:
    ValueIterationSolver(const ArmModel& model, double beta, int grid_size);

    // Solves for the given subsidy, warm-starting from the current table
    // (helpful inside bisection loops where lambda moves a little at a time).
    void solve(double lambda, double tol);

    // Exactly `sweeps` Bellman sweeps from the zero table. Two tables built
    // this way with the same sweep count are ordered pointwise whenever their
    // subsidies are (the operator and float rounding are both monotone),
    // which keeps finite differences in lambda exactly nonnegative.
    void iterate_exactly(double lambda, int sweeps);

    int sweeps() const { return sweeps_; }

    PlayIdle branch_values(Belief pi) const;  // at the current table
    ValueTable table() const;

    const ArmModel& model() const { return model_; }
    double beta() const { return beta_; }
    double lambda() const { return lambda_; }
    int grid_size() const { return n_; }

  private:
    double interp(double x) const;

    ArmModel model_;
    double beta_;
    double lambda_ = 0.0;
    int n_;
    int reset_idx_;
    int sweeps_ = 0;
    std::vector<double> grid_;
    std::vector<double> rho_;
    std::vector<int> passive_idx_;     // interpolation stencil of the passive image
    std::vector<double> passive_frac_;
    std::vector<double> v_;
    std::vector<double> v_next_;
};

ValueTable value_iteration(const ArmModel& model, double beta, double lambda,
                           int grid_size = 2001, double tol = 1e-10);

// Closed-form play/idle values under a hypothesised threshold pi_t. The
// formulas evaluate the threshold-policy recursions literally; the idle
// expression is the true idle-branch value whenever the waiting count
// K(pi, pi_t) is at least 1 and collapses to the play value at K = 0.
PlayIdle closed_form_values_type_a(const ArmModel& model, double beta, double lambda,
                                   double pi_t, Belief pi);
PlayIdle closed_form_values_type_b(const ArmModel& model, double beta, double lambda,
                                   double pi_t, Belief pi);
PlayIdle closed_form_values_dual_speed(const ArmModel& model, double beta, double lambda,
                                       double pi_t, Belief pi);

enum class ThresholdKind { Interior, AlwaysPlay, NeverPlay };
enum class ThresholdSource { ClosedForm, Oracle };

struct ThresholdResult {
    ThresholdKind kind = ThresholdKind::Interior;
    double pi_t = 0.0;  // meaningful for Interior
    ThresholdSource source = ThresholdSource::Oracle;
    int sign_changes = 0;     // dominance flips of v_play - v_idle beyond the band
    bool single_switch = true;
};

// Position of the threshold for monotonicity sweeps: AlwaysPlay maps to 1,
// NeverPlay to 0.
double threshold_position(const ThresholdResult& result);

// Runs value iteration and extracts the play/idle switch point: the smallest
// grid belief where idling weakly dominates, refined to the crossing of the
// linearly interpolated branches. A table whose dominance pattern flips more
// than once beyond the noise band is flagged via sign_changes/single_switch.
ThresholdResult optimal_threshold(const ArmModel& model, double beta, double lambda,
                                  int grid_size = 2001, double tol = 1e-10);
ThresholdResult optimal_threshold(ValueIterationSolver& solver, double lambda, double tol);

// Average-reward solution by the vanishing-discount route: for each beta in
// the (increasing) sequence, solve the discounted problem, take
// g = (1-beta) V(reference) and bias = V - V(reference) with reference belief
// 1 for TypeA and 0 for TypeB. The per-beta gains are returned so callers can
// confirm stabilization; `stabilized` is false when the last two gains differ
// by more than stab_tol.
struct AverageSolution {
    double gain = 0.0;
    std::vector<double> grid;
    std::vector<double> bias;
    double lambda = 0.0;
    std::vector<double> betas;
    std::vector<double> gains;
    bool stabilized = true;
    double last_gain_step = 0.0;
};

AverageSolution average_reward_solve(const ArmModel& model, double lambda,
                                     std::vector<double> betas = {0.99, 0.999, 0.9999},
                                     int grid_size = 2001, double tol = 1e-10,
                                     double stab_tol = 1e-3);

}  // namespace whittle
