#include "whittle/bandit_core.hpp"

#include <cmath>
#include <stdexcept>

namespace whittle {

std::string to_string(ArmKind kind) { return kind == ArmKind::TypeA ? "A" : "B"; }

std::string to_string(ModelVariant variant) {
    return variant == ModelVariant::Base ? "base" : "dual_speed_zero";
}

Criterion Criterion::discounted(double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("discount beta must lie in (0,1)");
    return Criterion{false, beta};
}

ArmModel ArmModel::base(ArmKind kind, double p, double rho0, double rho1) {
    ArmModel m;
    m.kind = kind;
    m.variant = ModelVariant::Base;
    m.p = p;
    m.rho0 = rho0;
    m.rho1 = rho1;
    m.validate();
    return m;
}

ArmModel ArmModel::dual_speed_zero(ArmKind kind, double p, double q, double rho0, double rho1) {
    ArmModel m;
    m.kind = kind;
    m.variant = ModelVariant::DualSpeedZero;
    m.p = p;
    m.q = q;
    m.rho0 = rho0;
    m.rho1 = rho1;
    m.validate();
    return m;
}

void ArmModel::validate() const {
    auto open01 = [](double x) { return x > 0.0 && x < 1.0; };
    if (!open01(p)) throw std::invalid_argument("arm parameter p must lie in (0,1)");
    if (!open01(rho0)) throw std::invalid_argument("arm parameter rho0 must lie in (0,1)");
    if (!open01(rho1)) throw std::invalid_argument("arm parameter rho1 must lie in (0,1)");
    if (variant == ModelVariant::DualSpeedZero) {
        if (!open01(q)) throw std::invalid_argument("arm parameter q must lie in (0,1)");
        if (p + q > 1.0) throw std::invalid_argument("dual-speed model requires p + q <= 1");
    }
}

double expected_reward(const ArmModel& model, Belief belief) {
    return belief.pi * model.rho0 + (1.0 - belief.pi) * model.rho1;
}

Belief belief_step_passive(const ArmModel& model, Belief belief) {
    const double pi = belief.pi;
    double next;
    if (model.variant == ModelVariant::DualSpeedZero) {
        next = pi * (1.0 - model.p) + (1.0 - pi) * model.q;
    } else if (model.kind == ArmKind::TypeA) {
        next = (1.0 - model.p) * pi;
    } else {
        next = pi + model.p * (1.0 - pi);
    }
    return Belief{clamp01(next)};
}

Belief belief_step_active(const ArmModel& model, Belief) {
    return Belief{model.kind == ArmKind::TypeA ? 1.0 : 0.0};
}

double gamma_infinity(const ArmModel& model) {
    if (model.variant != ModelVariant::DualSpeedZero)
        throw std::invalid_argument("gamma_infinity is defined for the dual-speed variant only");
    return model.q / (model.p + model.q);
}

PassiveCrossing passive_crossing(const ArmModel& model, Belief pi, double pi_t) {
    if (!(pi_t >= 0.0 && pi_t <= 1.0))
        throw std::invalid_argument("waiting-time threshold must lie in [0,1]");
    double x = clamp01(pi.pi);
    long k = 0;
    while (!(x < pi_t)) {
        const double nx = belief_step_passive(model, Belief{x}).pi;
        // Crossing below pi_t requires strict decrease. A non-decreasing step
        // means the iterates are rising toward their fixed point, or have
        // reached float resolution around it, and will never cross.
        if (nx >= x) return PassiveCrossing{std::nullopt, x};
        x = nx;
        ++k;
    }
    return PassiveCrossing{k, x};
}

std::optional<long> waiting_time(const ArmModel& model, Belief pi, double pi_t) {
    return passive_crossing(model, pi, pi_t).k;
}

SubsidyRange subsidy_bounds(const ArmModel& model, const Criterion& criterion) {
    // lambda_high = rho1 for every kind and criterion. The lower bound is the
    // index at belief 1, where the index is smallest. TypeA (both variants,
    // since gamma(1) = 1-p): rho0 + beta*p*(rho0-rho1), limiting to
    // rho0 + p*(rho0-rho1). Base TypeB: rho1 + (1-beta)*(rho0-rho1), limiting
    // to rho1. Dual TypeB sits in the rest-once-then-play regime at belief 1,
    // which lowers the bound to rho0 - beta*(1-p)*(rho0-rho1) (and its
    // beta -> 1 limit).
    SubsidyRange r;
    r.lambda_high = model.rho1;
    const double drop = model.rho0 - model.rho1;
    const bool dual_b = model.variant == ModelVariant::DualSpeedZero && model.kind == ArmKind::TypeB;
    if (criterion.average) {
        if (model.kind == ArmKind::TypeA)
            r.lambda_low = model.rho0 + model.p * drop;
        else
            r.lambda_low = dual_b ? model.rho0 - (1.0 - model.p) * drop : model.rho1;
    } else {
        const double beta = Criterion::discounted(criterion.beta).beta;
        if (model.kind == ArmKind::TypeA)
            r.lambda_low = model.rho0 + beta * model.p * drop;
        else
            r.lambda_low = dual_b ? model.rho0 - beta * (1.0 - model.p) * drop
                                  : model.rho1 + (1.0 - beta) * drop;
    }
    return r;
}

}  // namespace whittle
