#include "whittle/value_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace whittle {

namespace {

double lerp_on(const std::vector<double>& grid, const std::vector<double>& vals, double x) {
    const int n = static_cast<int>(grid.size());
    const double h = 1.0 / static_cast<double>(n - 1);
    double pos = clamp01(x) / h;
    int j = static_cast<int>(pos);
    if (j >= n - 1) j = n - 2;
    const double w = pos - static_cast<double>(j);
    return (1.0 - w) * vals[j] + w * vals[j + 1];
}

}  // namespace

double ValueTable::interpolate(double pi) const { return lerp_on(grid, v, pi); }

ValueIterationSolver::ValueIterationSolver(const ArmModel& model, double beta, int grid_size)
    : model_(model), beta_(Criterion::discounted(beta).beta), n_(grid_size) {
    model_.validate();
    if (n_ < 2) throw std::invalid_argument("value iteration needs a grid of at least 2 points");
    grid_.resize(n_);
    rho_.resize(n_);
    passive_idx_.resize(n_);
    passive_frac_.resize(n_);
    const double h = 1.0 / static_cast<double>(n_ - 1);
    for (int i = 0; i < n_; ++i) {
        grid_[i] = static_cast<double>(i) * h;
        rho_[i] = expected_reward(model_, Belief{grid_[i]});
        const double y = belief_step_passive(model_, Belief{grid_[i]}).pi;
        double pos = y / h;
        int j = static_cast<int>(pos);
        if (j >= n_ - 1) j = n_ - 2;
        passive_idx_[i] = j;
        passive_frac_[i] = pos - static_cast<double>(j);
    }
    grid_.back() = 1.0;
    reset_idx_ = model_.kind == ArmKind::TypeA ? n_ - 1 : 0;
    v_.assign(n_, 0.0);
    v_next_.assign(n_, 0.0);
}

void ValueIterationSolver::solve(double lambda, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("value iteration tolerance must be positive");
    lambda_ = lambda;
    const double step_bound = std::max({model_.rho0, model_.rho1, std::fabs(lambda)});
    const double value_bound = 2.0 * (step_bound / (1.0 - beta_) + 1.0);
    const long cap =
        static_cast<long>(std::ceil(std::log(tol * (1.0 - beta_) / value_bound) / std::log(beta_))) + 64;
    sweeps_ = 0;
    for (long it = 0; it < cap; ++it) {
        const double v_reset = v_[reset_idx_];
        double delta = 0.0;
        for (int i = 0; i < n_; ++i) {
            const double vp = rho_[i] + beta_ * v_reset;
            const int j = passive_idx_[i];
            const double w = passive_frac_[i];
            const double vi = lambda + beta_ * ((1.0 - w) * v_[j] + w * v_[j + 1]);
            const double nv = vp > vi ? vp : vi;
            const double d = std::fabs(nv - v_[i]);
            if (d > delta) delta = d;
            v_next_[i] = nv;
        }
        v_.swap(v_next_);
        ++sweeps_;
        if (delta < tol) return;
    }
    throw std::logic_error("value iteration failed to contract within the analytic cap");
}

void ValueIterationSolver::iterate_exactly(double lambda, int sweeps) {
    lambda_ = lambda;
    std::fill(v_.begin(), v_.end(), 0.0);
    for (int it = 0; it < sweeps; ++it) {
        const double v_reset = v_[reset_idx_];
        for (int i = 0; i < n_; ++i) {
            const double vp = rho_[i] + beta_ * v_reset;
            const int j = passive_idx_[i];
            const double w = passive_frac_[i];
            const double vi = lambda + beta_ * ((1.0 - w) * v_[j] + w * v_[j + 1]);
            v_next_[i] = vp > vi ? vp : vi;
        }
        v_.swap(v_next_);
    }
    sweeps_ = sweeps;
}

double ValueIterationSolver::interp(double x) const { return lerp_on(grid_, v_, x); }

PlayIdle ValueIterationSolver::branch_values(Belief pi) const {
    PlayIdle out;
    out.v_play = expected_reward(model_, pi) + beta_ * v_[reset_idx_];
    out.v_idle = lambda_ + beta_ * interp(belief_step_passive(model_, pi).pi);
    return out;
}

ValueTable ValueIterationSolver::table() const {
    ValueTable t;
    t.grid = grid_;
    t.beta = beta_;
    t.lambda = lambda_;
    t.sweeps = sweeps_;
    t.v_play.resize(n_);
    t.v_idle.resize(n_);
    t.v.resize(n_);
    for (int i = 0; i < n_; ++i) {
        const auto b = branch_values(Belief{grid_[i]});
        t.v_play[i] = b.v_play;
        t.v_idle[i] = b.v_idle;
        t.v[i] = std::max(b.v_play, b.v_idle);
    }
    return t;
}

ValueTable value_iteration(const ArmModel& model, double beta, double lambda, int grid_size,
                           double tol) {
    ValueIterationSolver solver(model, beta, grid_size);
    solver.solve(lambda, tol);
    return solver.table();
}

PlayIdle closed_form_values_type_a(const ArmModel& model, double beta, double lambda,
                                   double pi_t, Belief pi) {
    if (model.variant != ModelVariant::Base || model.kind != ArmKind::TypeA)
        throw std::invalid_argument("closed_form_values_type_a expects a Base TypeA model");
    beta = Criterion::discounted(beta).beta;
    const auto from_one = passive_crossing(model, Belief{1.0}, pi_t);
    if (!from_one.k.has_value())
        throw std::invalid_argument(
            "type-A closed form is degenerate when the wait from belief 1 is infinite (pi_t = 0)");
    const double k1 = static_cast<double>(*from_one.k);
    const double bK1 = std::pow(beta, k1);
    const double drop = model.rho0 - model.rho1;
    // V_idle(1): idle K(1,pi_t) steps collecting lambda, play once, repeat.
    const double v01 = (lambda * (1.0 - bK1) / (1.0 - beta) +
                        bK1 * (model.rho1 + drop * from_one.iterate)) /
                       (1.0 - beta * bK1);
    PlayIdle out;
    out.v_play = expected_reward(model, pi) + beta * v01;
    const auto from_pi = passive_crossing(model, pi, pi_t);
    const double kp = static_cast<double>(*from_pi.k);  // finite since pi_t > 0
    const double bKp = std::pow(beta, kp);
    out.v_idle = lambda * (1.0 - bKp) / (1.0 - beta) + beta * bKp * v01 +
                 bKp * (model.rho1 + drop * from_pi.iterate);
    return out;
}

PlayIdle closed_form_values_type_b(const ArmModel& model, double beta, double lambda,
                                   double pi_t, Belief pi) {
    if (model.variant != ModelVariant::Base || model.kind != ArmKind::TypeB)
        throw std::invalid_argument("closed_form_values_type_b expects a Base TypeB model");
    beta = Criterion::discounted(beta).beta;
    PlayIdle out;
    if (pi_t > 0.0) {
        out.v_play = expected_reward(model, pi) + beta * model.rho1 / (1.0 - beta);
        const Belief next = belief_step_passive(model, pi);
        if (next.pi < pi_t) {
            out.v_idle = lambda + beta * expected_reward(model, next) +
                         beta * beta * model.rho1 / (1.0 - beta);
        } else {
            out.v_idle = lambda / (1.0 - beta);
        }
    } else {
        out.v_play = expected_reward(model, pi) + beta * lambda / (1.0 - beta);
        out.v_idle = lambda / (1.0 - beta);
    }
    return out;
}

PlayIdle closed_form_values_dual_speed(const ArmModel& model, double beta, double lambda,
                                       double pi_t, Belief pi) {
    if (model.variant != ModelVariant::DualSpeedZero)
        throw std::invalid_argument("closed_form_values_dual_speed expects a DualSpeedZero model");
    model.validate();
    beta = Criterion::discounted(beta).beta;
    const double drop = model.rho0 - model.rho1;
    PlayIdle out;
    if (model.kind == ArmKind::TypeA) {
        const auto from_one = passive_crossing(model, Belief{1.0}, pi_t);
        if (!from_one.k.has_value()) {
            // pi_t at or below gamma_infinity: the rested arm never crosses,
            // idling from belief 1 earns the subsidy forever.
            const double v01 = lambda / (1.0 - beta);
            out.v_play = expected_reward(model, pi) + beta * v01;
            const Belief next = belief_step_passive(model, pi);
            if (next.pi < pi_t) {
                out.v_idle = lambda + beta * expected_reward(model, next) + beta * beta * v01;
            } else {
                out.v_idle = lambda / (1.0 - beta);
            }
            return out;
        }
        const double k1 = static_cast<double>(*from_one.k);
        const double bK1 = std::pow(beta, k1);
        const double rho_k1 = model.rho1 + drop * from_one.iterate;
        const double v01 =
            (lambda * (1.0 - bK1) / (1.0 - beta) + bK1 * rho_k1) / (1.0 - beta * bK1);
        out.v_play = expected_reward(model, pi) + beta * v01;
        const auto from_pi = passive_crossing(model, pi, pi_t);
        // finite here: pi_t above gamma_infinity, the rested belief contracts below it
        const double kp = static_cast<double>(*from_pi.k);
        const double bKp = std::pow(beta, kp);
        out.v_idle = lambda * (1.0 - bKp) / (1.0 - beta) +
                     bKp * (model.rho1 + drop * from_pi.iterate) + beta * bKp * v01;
        return out;
    }
    // TypeB
    if (pi_t > 0.0) {
        out.v_play = expected_reward(model, pi) + beta * model.rho1 / (1.0 - beta);
        // idle branch: at least one rest step, then play at the first iterate
        // strictly below the threshold; never crossing means idling forever.
        const auto after_one = passive_crossing(model, belief_step_passive(model, pi), pi_t);
        if (after_one.k.has_value()) {
            const double m = static_cast<double>(*after_one.k) + 1.0;
            const double bM = std::pow(beta, m);
            out.v_idle = lambda * (1.0 - bM) / (1.0 - beta) +
                         bM * (expected_reward(model, Belief{after_one.iterate}) +
                               beta * model.rho1 / (1.0 - beta));
        } else {
            out.v_idle = lambda / (1.0 - beta);
        }
    } else {
        out.v_play = expected_reward(model, pi) + beta * lambda / (1.0 - beta);
        out.v_idle = lambda / (1.0 - beta);
    }
    return out;
}

double threshold_position(const ThresholdResult& result) {
    switch (result.kind) {
        case ThresholdKind::AlwaysPlay: return 1.0;
        case ThresholdKind::NeverPlay: return 0.0;
        default: return result.pi_t;
    }
}

ThresholdResult optimal_threshold(ValueIterationSolver& solver, double lambda, double tol) {
    solver.solve(lambda, tol);
    const ValueTable t = solver.table();
    const int n = static_cast<int>(t.grid.size());
    const double h = 1.0 / static_cast<double>(n - 1);
    const double span = std::fabs(solver.model().rho1 - solver.model().rho0);

    ThresholdResult res;
    res.source = ThresholdSource::Oracle;

    // dominance flips beyond the numeric band (interpolation + residual noise)
    const double band = std::max(1e-7, span * h);
    int flips = 0;
    int last_sign = 0;
    for (int i = 0; i < n; ++i) {
        const double d = t.v_play[i] - t.v_idle[i];
        if (std::fabs(d) <= band) continue;
        const int s = d > 0.0 ? 1 : -1;
        if (last_sign != 0 && s != last_sign) ++flips;
        last_sign = s;
    }
    res.sign_changes = flips;
    res.single_switch = flips <= 1;

    int first_idle = -1;
    for (int i = 0; i < n; ++i) {
        if (t.v_idle[i] >= t.v_play[i]) {
            first_idle = i;
            break;
        }
    }
    if (first_idle < 0) {
        res.kind = ThresholdKind::AlwaysPlay;
        res.pi_t = 1.0;
    } else if (first_idle == 0) {
        res.kind = ThresholdKind::NeverPlay;
        res.pi_t = 0.0;
    } else {
        res.kind = ThresholdKind::Interior;
        // crossing of the linearly interpolated branches between the
        // bracketing grid points
        const double d0 = t.v_play[first_idle - 1] - t.v_idle[first_idle - 1];
        const double d1 = t.v_play[first_idle] - t.v_idle[first_idle];
        const double w = d0 - d1 != 0.0 ? d0 / (d0 - d1) : 0.0;
        res.pi_t = t.grid[first_idle - 1] + h * std::clamp(w, 0.0, 1.0);
    }
    return res;
}

ThresholdResult optimal_threshold(const ArmModel& model, double beta, double lambda,
                                  int grid_size, double tol) {
    ValueIterationSolver solver(model, beta, grid_size);
    return optimal_threshold(solver, lambda, tol);
}

AverageSolution average_reward_solve(const ArmModel& model, double lambda,
                                     std::vector<double> betas, int grid_size, double tol,
                                     double stab_tol) {
    if (betas.empty()) throw std::invalid_argument("average_reward_solve needs at least one beta");
    for (std::size_t i = 1; i < betas.size(); ++i)
        if (!(betas[i] > betas[i - 1]))
            throw std::invalid_argument("beta sequence must increase toward 1");

    AverageSolution out;
    out.lambda = lambda;
    out.betas = betas;
    for (double beta : betas) {
        ValueTable t = value_iteration(model, beta, lambda, grid_size, tol);
        const int ref = model.kind == ArmKind::TypeA ? static_cast<int>(t.grid.size()) - 1 : 0;
        out.gains.push_back((1.0 - beta) * t.v[ref]);
        if (beta == betas.back()) {
            out.grid = t.grid;
            out.bias.resize(t.v.size());
            for (std::size_t i = 0; i < t.v.size(); ++i) out.bias[i] = t.v[i] - t.v[ref];
        }
    }
    out.gain = out.gains.back();
    if (out.gains.size() >= 2) {
        out.last_gain_step = std::fabs(out.gains.back() - out.gains[out.gains.size() - 2]);
        out.stabilized = out.last_gain_step <= stab_tol;
    }
    return out;
}

}  // namespace whittle
