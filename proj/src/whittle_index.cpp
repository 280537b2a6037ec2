#include "whittle/whittle_index.hpp"

#include <cmath>
#include <stdexcept>

namespace whittle {

namespace {

std::string regime_tag(const char* name, std::optional<long> k) {
    std::string s = name;
    if (k.has_value()) s += " K=" + std::to_string(*k);
    return s;
}

}  // namespace

IndexResult index_discounted(const ArmModel& model, double beta, Belief pi) {
    model.validate();
    const Criterion crit = Criterion::discounted(beta);
    const double drop = model.rho0 - model.rho1;
    IndexResult out;
    out.criterion = crit;

    if (model.kind == ArmKind::TypeB) {
        if (pi.pi == 0.0) {
            out.w = model.rho1;
            out.regime = "boundary pi=0";
            return out;
        }
        if (model.variant == ModelVariant::Base) {
            out.w = model.rho1 + (1.0 - beta) * drop * pi.pi;
            out.regime = "interior";
        } else {
            const Belief next = belief_step_passive(model, pi);
            if (next.pi < pi.pi) {
                // Above gamma_infinity a rest improves the arm, so the
                // indifferent policy rests exactly once before playing:
                // W = rho(pi) - beta rho(gamma(pi)) + beta rho1.
                out.w = expected_reward(model, pi) - beta * expected_reward(model, next) +
                        beta * model.rho1;
                out.regime = "(gamma_inf,1]";
            } else {
                // At or below gamma_infinity rests only hurt; idling forever
                // is the indifferent alternative.
                out.w = (1.0 - beta) * expected_reward(model, pi) + beta * model.rho1;
                out.regime = "[0,gamma_inf]";
            }
        }
        return out;
    }

    // TypeA, both variants: the waiting count from belief 1 down to pi drives
    // the formula; an infinite wait pins the continuity limit.
    const auto crossing = passive_crossing(model, Belief{1.0}, pi.pi);
    out.waiting_k = crossing.k;
    if (!crossing.k.has_value()) {
        if (model.variant == ModelVariant::Base) {
            // pi = 0 only; limit of the closed form
            out.w = model.rho1;
            out.regime = "limit pi=0";
        } else {
            out.w = expected_reward(model, pi);
            out.regime = "[0,gamma_inf)";
        }
        return out;
    }
    const double k = static_cast<double>(*crossing.k);
    const double bK1 = std::pow(beta, k + 1.0);
    if (model.variant == ModelVariant::Base) {
        out.w = model.rho1 + bK1 * drop * crossing.iterate +
                drop / (1.0 - beta) * (1.0 - bK1) * (1.0 - beta * (1.0 - model.p)) * pi.pi;
        out.regime = regime_tag("interior", crossing.k);
    } else {
        const double gamma_pi = belief_step_passive(model, pi).pi;
        out.w = model.rho1 + bK1 * drop * crossing.iterate +
                drop / (1.0 - beta) * (1.0 - bK1) * (pi.pi - beta * gamma_pi);
        out.regime = regime_tag("[gamma_inf,1]", crossing.k);
    }
    return out;
}

IndexResult index_average(const ArmModel& model, Belief pi) {
    model.validate();
    const double drop = model.rho0 - model.rho1;
    IndexResult out;
    out.criterion = Criterion::average_reward();

    if (model.kind == ArmKind::TypeB) {
        if (model.variant == ModelVariant::DualSpeedZero) {
            const Belief next = belief_step_passive(model, pi);
            if (next.pi < pi.pi) {
                out.w = model.rho1 + drop * (pi.pi - next.pi);
                out.regime = "(gamma_inf,1]";
                return out;
            }
        }
        out.w = model.rho1;
        out.regime = "constant";
        return out;
    }

    const auto crossing = passive_crossing(model, Belief{1.0}, pi.pi);
    out.waiting_k = crossing.k;
    if (!crossing.k.has_value()) {
        if (model.variant == ModelVariant::Base) {
            out.w = model.rho1;
            out.regime = "limit pi=0";
        } else {
            out.w = expected_reward(model, pi);
            out.regime = "[0,gamma_inf)";
        }
        return out;
    }
    const double k = static_cast<double>(*crossing.k);
    if (model.variant == ModelVariant::Base) {
        out.w = model.rho1 + drop * crossing.iterate + (k + 1.0) * model.p * drop * pi.pi;
        out.regime = regime_tag("interior", crossing.k);
    } else {
        const double gamma_pi = belief_step_passive(model, pi).pi;
        out.w = model.rho1 + drop * crossing.iterate + (k + 1.0) * drop * (pi.pi - gamma_pi);
        out.regime = regime_tag("[gamma_inf,1]", crossing.k);
    }
    return out;
}

OracleIndex index_oracle(ValueIterationSolver& solver, Belief pi, const OracleOptions& options) {
    if (!(options.lambda_tol > 0.0))
        throw std::invalid_argument("index_oracle lambda tolerance must be positive");
    const SubsidyRange range =
        subsidy_bounds(solver.model(), Criterion::discounted(solver.beta()));
    double lo = range.lambda_low - options.bracket_pad;
    double hi = range.lambda_high + options.bracket_pad;

    auto dominance = [&](double lambda) {
        solver.solve(lambda, options.vi_tol);
        const PlayIdle b = solver.branch_values(pi);
        return b.v_play - b.v_idle;
    };

    // v_play - v_idle is decreasing in lambda (the idle branch absorbs the
    // subsidy), so a single sign change pins the index.
    if (!(dominance(lo) > 0.0) || !(dominance(hi) < 0.0))
        return OracleIndex{OracleStatus::NoCrossing, 0.0};
    while (hi - lo > options.lambda_tol) {
        const double mid = 0.5 * (lo + hi);
        if (dominance(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return OracleIndex{OracleStatus::Crossed, 0.5 * (lo + hi)};
}

OracleIndex index_oracle(const ArmModel& model, double beta, Belief pi,
                         const OracleOptions& options) {
    ValueIterationSolver solver(model, beta, options.grid_size);
    return index_oracle(solver, pi, options);
}

IndexabilityReport indexability_audit(const ArmModel& model, double beta, int lambda_points,
                                      int grid_size, double vi_tol) {
    if (lambda_points < 3) throw std::invalid_argument("indexability audit needs >= 3 points");
    const SubsidyRange range = subsidy_bounds(model, Criterion::discounted(beta));
    IndexabilityReport report;
    ValueIterationSolver solver(model, beta, grid_size);
    const double h = 1.0 / static_cast<double>(grid_size - 1);
    for (int i = 0; i < lambda_points; ++i) {
        const double lambda = range.lambda_low + (range.lambda_high - range.lambda_low) *
                                                     static_cast<double>(i) /
                                                     static_cast<double>(lambda_points - 1);
        const ThresholdResult th = optimal_threshold(solver, lambda, vi_tol);
        report.lambdas.push_back(lambda);
        report.thresholds.push_back(threshold_position(th));
    }
    for (std::size_t i = 1; i < report.thresholds.size(); ++i) {
        const double rise = report.thresholds[i] - report.thresholds[i - 1];
        if (rise > report.worst_increase) report.worst_increase = rise;
    }
    // ties at grid resolution are allowed; a genuine increase fails
    report.pass = report.worst_increase <= h;
    return report;
}

}  // namespace whittle
