#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "whittle/bandit_core.hpp"
#include "whittle/rng.hpp"
#include "whittle/value_functions.hpp"
#include "whittle/whittle_index.hpp"

using namespace whittle;

namespace {

ArmModel base_a(double p, double r0, double r1) { return ArmModel::base(ArmKind::TypeA, p, r0, r1); }
ArmModel base_b(double p, double r0, double r1) { return ArmModel::base(ArmKind::TypeB, p, r0, r1); }

ArmModel random_standard(SplitMix64& rng, ArmKind kind, ModelVariant variant) {
    const double p = 0.05 + 0.4 * rng.next_double();
    const double r0 = 0.02 + 0.28 * rng.next_double();
    const double r1 = 0.5 + 0.45 * rng.next_double();
    if (variant == ModelVariant::Base) return ArmModel::base(kind, p, r0, r1);
    const double q = 0.05 + (1.0 - p - 0.1) * rng.next_double();
    return ArmModel::dual_speed_zero(kind, p, q, r0, r1);
}

// Test-only average-reward index oracle: damped relative value iteration on
// the belief grid (no discounting, independent of the vanishing-discount
// closed forms), followed by the same subsidy bisection as the discounted
// oracle.
struct AvgRvi {
    const ArmModel& model;
    int n;
    std::vector<double> grid, rho, w;
    std::vector<int> idx;
    std::vector<double> frac;
    int reset;

    explicit AvgRvi(const ArmModel& m, int grid_size) : model(m), n(grid_size) {
        grid.resize(n);
        rho.resize(n);
        idx.resize(n);
        frac.resize(n);
        const double h = 1.0 / (n - 1);
        for (int i = 0; i < n; ++i) {
            grid[i] = i * h;
            rho[i] = expected_reward(m, Belief{grid[i]});
            double pos = belief_step_passive(m, Belief{grid[i]}).pi / h;
            int j = std::min(static_cast<int>(pos), n - 2);
            idx[i] = j;
            frac[i] = pos - j;
        }
        reset = m.kind == ArmKind::TypeA ? n - 1 : 0;
        w.assign(n, 0.0);
    }

    double bellman(int i, double lambda, const std::vector<double>& v) const {
        const double play = rho[i] + v[reset];
        const double idle = lambda + (1.0 - frac[i]) * v[idx[i]] + frac[i] * v[idx[i] + 1];
        return std::max(play, idle);
    }

    void solve(double lambda, double tol, int cap = 400000) {
        std::vector<double> tw(n);
        for (int it = 0; it < cap; ++it) {
            double lo = 1e300, hi = -1e300;
            for (int i = 0; i < n; ++i) {
                tw[i] = bellman(i, lambda, w);
                const double d = tw[i] - w[i];
                lo = std::min(lo, d);
                hi = std::max(hi, d);
            }
            const double off = tw[reset];
            for (int i = 0; i < n; ++i) w[i] = 0.5 * w[i] + 0.5 * (tw[i] - off);
            if (hi - lo < tol) return;
        }
        throw std::logic_error("relative value iteration did not settle");
    }

    double dominance(Belief pi, double lambda) {
        solve(lambda, 1e-11);
        const double play = expected_reward(model, pi) + w[reset];
        const double h = 1.0 / (n - 1);
        double pos = belief_step_passive(model, pi).pi / h;
        int j = std::min(static_cast<int>(pos), n - 2);
        const double f = pos - j;
        const double idle = lambda + (1.0 - f) * w[j] + f * w[j + 1];
        return play - idle;
    }

    double index_at(Belief pi) {
        const auto r = subsidy_bounds(model, Criterion::average_reward());
        double lo = r.lambda_low - 0.1, hi = r.lambda_high + 0.1;
        REQUIRE(dominance(pi, lo) > 0.0);
        REQUIRE(dominance(pi, hi) < 0.0);
        while (hi - lo > 2e-5) {
            const double mid = 0.5 * (lo + hi);
            (dominance(pi, mid) > 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
};

}  // namespace

TEST_CASE("discounted index: frozen closed-form values") {
    // Base TypeB at pi = 0 is rho1; interior follows rho1 + (1-beta)(rho0-rho1) pi
    auto b = base_b(0.3, 0.1, 0.7);
    CHECK(index_discounted(b, 0.9, Belief{0.0}).w == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(index_discounted(b, 0.9, Belief{0.5}).w == doctest::Approx(0.7 - 0.1 * 0.6 * 0.5).epsilon(1e-12));

    // Base TypeA: p=0.5, beta=0.5, rho0~0, rho1~1, pi=0.25 -> K=3, W=0.640625
    auto a = base_a(0.5, 1e-12, 1.0 - 1e-12);
    auto res = index_discounted(a, 0.5, Belief{0.25});
    CHECK(res.w == doctest::Approx(0.640625).epsilon(1e-9));
    REQUIRE(res.waiting_k.has_value());
    CHECK(*res.waiting_k == 3);

    // TypeA at pi = 0 pins the continuity limit rho1
    CHECK(index_discounted(a, 0.5, Belief{0.0}).w == doctest::Approx(1.0).epsilon(1e-9));

    // TypeA at pi = 1 recovers the lower subsidy bound
    auto a2 = base_a(0.2, 0.1, 0.7);
    CHECK(index_discounted(a2, 0.99, Belief{1.0}).w ==
          doctest::Approx(subsidy_bounds(a2, Criterion::discounted(0.99)).lambda_low).epsilon(1e-12));

    // Dual TypeB: beta=0.9, rho0=0.1, rho1=0.7, pi=0.5 -> 0.67
    auto db = ArmModel::dual_speed_zero(ArmKind::TypeB, 0.1, 0.3, 0.1, 0.7);
    CHECK(index_discounted(db, 0.9, Belief{0.5}).w == doctest::Approx(0.67).epsilon(1e-12));

    // Dual TypeA below gamma_infinity: the index is the myopic reward
    auto da = ArmModel::dual_speed_zero(ArmKind::TypeA, 0.1, 0.3, 0.1, 0.7);  // ginf = 0.75
    CHECK(index_discounted(da, 0.9, Belief{0.4}).w ==
          doctest::Approx(expected_reward(da, Belief{0.4})).epsilon(1e-12));
    CHECK(index_discounted(da, 0.9, Belief{0.4}).regime == "[0,gamma_inf)");
}

TEST_CASE("dual type-B index switches regime at gamma_infinity") {
    // gamma_inf = 0.1305/(0.4293+0.1305) ~ 0.2331; above it a rest improves
    // the arm and the idle-forever formula overstates the index.
    auto m = ArmModel::dual_speed_zero(ArmKind::TypeB, 0.4293, 0.1305, 0.1622, 0.6510);
    const double beta = 0.5;
    const double ginf = gamma_infinity(m);
    // frozen against the subsidy-bisection oracle (0.339785 at lambda_tol 1e-5)
    const double g09 = belief_step_passive(m, Belief{0.9}).pi;
    const double expect09 = expected_reward(m, Belief{0.9}) -
                            beta * expected_reward(m, Belief{g09}) + beta * m.rho1;
    auto w09 = index_discounted(m, beta, Belief{0.9});
    CHECK(w09.w == doctest::Approx(expect09).epsilon(1e-15));
    CHECK(w09.w == doctest::Approx(0.339785).epsilon(1e-4));
    CHECK(w09.regime == "(gamma_inf,1]");
    // below the fixed point the idle-forever form applies
    auto wlo = index_discounted(m, beta, Belief{0.1});
    CHECK(wlo.w == doctest::Approx((1.0 - beta) * expected_reward(m, Belief{0.1}) +
                                   beta * m.rho1).epsilon(1e-15));
    // continuity across the regime boundary
    const double below = index_discounted(m, beta, Belief{ginf - 1e-9}).w;
    const double above = index_discounted(m, beta, Belief{ginf + 1e-9}).w;
    CHECK(std::fabs(below - above) < 1e-6);
    // the whole curve is non-increasing in pi
    double prev = index_discounted(m, beta, Belief{0.0}).w;
    for (double pi = 0.02; pi <= 1.0; pi += 0.02) {
        const double w = index_discounted(m, beta, Belief{pi}).w;
        CHECK(w <= prev + 1e-12);
        prev = w;
    }
    // average-reward regime split, continuous as well
    CHECK(index_average(m, Belief{0.15}).w == doctest::Approx(m.rho1).epsilon(1e-15));
    const double avg_hi = index_average(m, Belief{0.9}).w;
    CHECK(avg_hi == doctest::Approx(m.rho1 + (m.rho0 - m.rho1) * (0.9 - g09)).epsilon(1e-15));
    CHECK(avg_hi < m.rho1);
}

TEST_CASE("discounted type-A index is continuous at pi -> 0") {
    auto a = base_a(0.3, 0.1, 0.7);
    double prev = index_discounted(a, 0.9, Belief{1e-1}).w;
    for (double pi : {1e-2, 1e-4, 1e-6, 1e-9}) {
        double w = index_discounted(a, 0.9, Belief{pi}).w;
        CHECK(w > prev);
        prev = w;
    }
    CHECK(std::fabs(prev - a.rho1) < 1e-6);
}

TEST_CASE("average index: frozen values and the vanishing-discount correction") {
    auto b = base_b(0.3, 0.1, 0.7);
    for (double pi : {0.0, 0.3, 1.0})
        CHECK(index_average(b, Belief{pi}).w == doctest::Approx(0.7).epsilon(1e-15));

    // Base TypeA, p=0.3, rho0=0.1, rho1=0.7, pi=0.4: K(1,0.4)=3. The
    // vanishing-discount limit of the discounted index carries (K+1) on the
    // belief term: W = 0.7 - 0.6*0.343 - 4*0.6*0.3*0.4 = 0.2062.
    auto a = base_a(0.3, 0.1, 0.7);
    auto res = index_average(a, Belief{0.4});
    REQUIRE(res.waiting_k.has_value());
    CHECK(*res.waiting_k == 3);
    CHECK(res.w == doctest::Approx(0.2062).epsilon(1e-12));
    // and it must sit within 5e-2 of the beta = 0.9999 discounted index
    CHECK(std::fabs(index_discounted(a, 0.9999, Belief{0.4}).w - res.w) < 5e-2);

    // At pi = 1 the average index equals the average lower subsidy bound
    // rho0 + p(rho0 - rho1), the beta -> 1 limit of the discounted value.
    CHECK(index_average(a, Belief{1.0}).w ==
          doctest::Approx(subsidy_bounds(a, Criterion::average_reward()).lambda_low).epsilon(1e-12));

    // pi = 0 limit
    CHECK(index_average(a, Belief{0.0}).w == doctest::Approx(0.7).epsilon(1e-15));

    // Dual TypeB average matches the base TypeB constant
    auto db = ArmModel::dual_speed_zero(ArmKind::TypeB, 0.1, 0.3, 0.1, 0.7);
    CHECK(index_average(db, Belief{0.6}).w == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("average index agrees with an independent relative-value-iteration oracle") {
    // Base TypeA spot checks, including the spec's worked point pi = 0.4.
    auto a = base_a(0.3, 0.1, 0.7);
    AvgRvi rvi(a, 1001);
    for (double pi : {0.4, 0.75, 1.0}) {
        const double oracle = rvi.index_at(Belief{pi});
        const double closed = index_average(a, Belief{pi}).w;
        CHECK(std::fabs(oracle - closed) < 3e-3);
    }
    // Dual TypeA above gamma_infinity
    auto da = ArmModel::dual_speed_zero(ArmKind::TypeA, 0.15, 0.25, 0.1, 0.7);  // ginf = 0.625
    AvgRvi drvi(da, 1001);
    for (double pi : {0.8, 0.95}) {
        const double oracle = drvi.index_at(Belief{pi});
        const double closed = index_average(da, Belief{pi}).w;
        CHECK(std::fabs(oracle - closed) < 3e-3);
    }
}

TEST_CASE("discounted index agrees with the subsidy-bisection oracle") {
    SplitMix64 rng(777);
    OracleOptions opt;
    opt.grid_size = 2001;
    opt.lambda_tol = 1e-5;
    struct Fam {
        ArmKind kind;
        ModelVariant variant;
    };
    const Fam fams[] = {{ArmKind::TypeA, ModelVariant::Base},
                        {ArmKind::TypeB, ModelVariant::Base},
                        {ArmKind::TypeA, ModelVariant::DualSpeedZero},
                        {ArmKind::TypeB, ModelVariant::DualSpeedZero}};
    for (const auto& fam : fams) {
        for (int rep = 0; rep < 3; ++rep) {
            auto m = random_standard(rng, fam.kind, fam.variant);
            const double beta = rep == 0 ? 0.5 : (rep == 1 ? 0.9 : 0.99);
            for (double pi : {0.1, 0.5, 0.9}) {
                const auto oracle = index_oracle(m, beta, Belief{pi}, opt);
                REQUIRE(oracle.status == OracleStatus::Crossed);
                const double closed = index_discounted(m, beta, Belief{pi}).w;
                CHECK(std::fabs(oracle.w - closed) < 5e-3);
            }
        }
    }
    // the oracle reproduces the boundary value at pi = 0 for TypeB
    auto b = base_b(0.3, 0.1, 0.7);
    auto at0 = index_oracle(b, 0.9, Belief{0.0}, opt);
    REQUIRE(at0.status == OracleStatus::Crossed);
    CHECK(std::fabs(at0.w - 0.7) < 1e-3);
    // frozen worked point vs oracle
    auto a = base_a(0.5, 1e-12, 1.0 - 1e-12);
    auto o = index_oracle(a, 0.5, Belief{0.25}, opt);
    REQUIRE(o.status == OracleStatus::Crossed);
    CHECK(std::fabs(o.w - 0.640625) < 5e-3);
}

TEST_CASE("vanishing-discount consistency of the index family") {
    SplitMix64 rng(31337);
    const double betas[] = {0.9, 0.99, 0.999, 0.9999};
    for (int rep = 0; rep < 6; ++rep) {
        const ModelVariant variant = rep < 3 ? ModelVariant::Base : ModelVariant::DualSpeedZero;
        auto m = random_standard(rng, ArmKind::TypeA, variant);
        for (double pi : {0.1, 0.4, 0.8}) {
            const double avg = index_average(m, Belief{pi}).w;
            double prev_gap = 1e300;
            for (double beta : betas) {
                const double gap = std::fabs(index_discounted(m, beta, Belief{pi}).w - avg);
                CHECK(gap <= prev_gap + 1e-12);
                prev_gap = gap;
            }
            CHECK(prev_gap < 5e-2);
        }
        // TypeB: the gap is exactly (1-beta)(rho1-rho0)pi for the base variant
        auto b = random_standard(rng, ArmKind::TypeB, ModelVariant::Base);
        for (double beta : betas) {
            for (double pi : {0.2, 0.7}) {
                const double gap = std::fabs(index_discounted(b, beta, Belief{pi}).w - b.rho1);
                CHECK(gap == doctest::Approx((1.0 - beta) * (b.rho1 - b.rho0) * pi).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("index range and monotonicity") {
    SplitMix64 rng(60601);
    for (int rep = 0; rep < 20; ++rep) {
        const ArmKind kind = rep % 2 == 0 ? ArmKind::TypeA : ArmKind::TypeB;
        const ModelVariant variant = rep % 4 < 2 ? ModelVariant::Base : ModelVariant::DualSpeedZero;
        auto m = random_standard(rng, kind, variant);
        for (double beta : {0.5, 0.9, 0.99}) {
            const auto r = subsidy_bounds(m, Criterion::discounted(beta));
            for (double pi = 0.0; pi <= 1.0; pi += 0.1) {
                const double w = index_discounted(m, beta, Belief{pi}).w;
                CHECK(w >= r.lambda_low - 1e-9);
                CHECK(w <= r.lambda_high + 1e-9);
            }
        }
        const auto ravg = subsidy_bounds(m, Criterion::average_reward());
        for (double pi = 0.0; pi <= 1.0; pi += 0.1) {
            const double w = index_average(m, Belief{pi}).w;
            CHECK(w >= ravg.lambda_low - 1e-9);
            CHECK(w <= ravg.lambda_high + 1e-9);
        }
    }
    // TypeB discounted index strictly decreasing on (0,1]
    auto b = base_b(0.25, 0.1, 0.7);
    double prev = index_discounted(b, 0.9, Belief{0.05}).w;
    for (double pi = 0.15; pi <= 1.0; pi += 0.1) {
        const double w = index_discounted(b, 0.9, Belief{pi}).w;
        CHECK(w < prev);
        prev = w;
    }
}

TEST_CASE("indexability audit") {
    auto a = base_a(0.3, 0.1, 0.7);
    auto report = indexability_audit(a, 0.9, 50, 1001, 1e-10);
    CHECK(report.pass);
    REQUIRE(report.thresholds.size() == 50);
    // thresholds decrease from the always-play end toward never-play
    CHECK(report.thresholds.front() >= report.thresholds.back());
    CHECK(report.thresholds.front() > 0.9);
    CHECK(report.thresholds.back() < 0.1);

    // beyond the subsidy bounds the threshold degenerates
    const auto r = subsidy_bounds(a, Criterion::discounted(0.9));
    CHECK(optimal_threshold(a, 0.9, r.lambda_high + 0.01, 1001, 1e-10).kind ==
          ThresholdKind::NeverPlay);
    CHECK(optimal_threshold(a, 0.9, r.lambda_low - 0.01, 1001, 1e-10).kind ==
          ThresholdKind::AlwaysPlay);

    CHECK_THROWS(indexability_audit(a, 0.9, 2, 101, 1e-8));
}
