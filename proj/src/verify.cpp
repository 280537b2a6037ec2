#include "whittle/verify.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "whittle/parallel.hpp"
#include "whittle/presets.hpp"
#include "whittle/rng.hpp"
#include "whittle/sim.hpp"
#include "whittle/thompson.hpp"
#include "whittle/value_functions.hpp"
#include "whittle/whittle_index.hpp"

namespace whittle::verify {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(double x) {
    std::ostringstream ss;
    ss.precision(4);
    ss << x;
    return ss.str();
}

const Family kFamilies[] = {Family::BaseA, Family::BaseB, Family::DualA, Family::DualB};

// Thread-safe running maximum (starts at -infinity).
struct GapTracker {
    std::atomic<std::uint64_t> bits{
        std::bit_cast<std::uint64_t>(-std::numeric_limits<double>::infinity())};
    void update(double x) {
        std::uint64_t cur = bits.load();
        while (x > std::bit_cast<double>(cur)) {
            if (bits.compare_exchange_weak(cur, std::bit_cast<std::uint64_t>(x))) return;
        }
    }
    double value() const { return std::bit_cast<double>(bits.load()); }
};

std::vector<double> pi_lattice() {
    std::vector<double> out;
    for (int i = 1; i <= 9; ++i) out.push_back(0.1 * i);
    return out;
}

}  // namespace

std::string to_string(Family family) {
    switch (family) {
        case Family::BaseA: return "base-A";
        case Family::BaseB: return "base-B";
        case Family::DualA: return "dual-A";
        default: return "dual-B";
    }
}

std::vector<ArmModel> battery(Family family, int count, std::uint64_t seed) {
    SplitMix64 rng(stream_seed(seed, static_cast<std::uint64_t>(family), 0xBA7));
    std::vector<ArmModel> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double p = 0.05 + 0.4 * rng.next_double();
        const double rho0 = 0.02 + 0.28 * rng.next_double();
        const double rho1 = 0.5 + 0.45 * rng.next_double();
        const ArmKind kind =
            (family == Family::BaseA || family == Family::DualA) ? ArmKind::TypeA : ArmKind::TypeB;
        if (family == Family::BaseA || family == Family::BaseB) {
            out.push_back(ArmModel::base(kind, p, rho0, rho1));
        } else {
            const double q = 0.05 + (1.0 - p - 0.1) * rng.next_double();
            out.push_back(ArmModel::dual_speed_zero(kind, p, q, rho0, rho1));
        }
    }
    return out;
}

Options Options::quick() {
    Options o;
    o.models_per_family = 6;
    o.five_arm_seeds = 30;
    o.large_n_seeds = 8;
    o.learn_seeds = 6;
    o.learn_horizon = 2000;
    return o;
}

CheckResult check_oracle_agreement(const Options& options) {
    const auto t0 = clock_type::now();
    const auto pis = pi_lattice();
    GapTracker worst;
    std::atomic<int> no_crossings{0};
    std::atomic<std::uint64_t> cpu_ms{0};

    struct Task {
        ArmModel model;
        double beta;
    };
    std::vector<Task> tasks;
    for (Family fam : kFamilies)
        for (const auto& m : battery(fam, options.models_per_family, options.battery_seed))
            for (double beta : options.betas) tasks.push_back({m, beta});

    parallel_for(tasks.size(), [&](std::size_t ti) {
        const auto task_t0 = clock_type::now();
        const auto& task = tasks[ti];
        OracleOptions opt;
        opt.grid_size = options.grid_size;
        opt.lambda_tol = options.lambda_tol;
        ValueIterationSolver solver(task.model, task.beta, options.grid_size);
        for (double pi : pis) {
            const auto oracle = index_oracle(solver, Belief{pi}, opt);
            if (oracle.status != OracleStatus::Crossed) {
                no_crossings.fetch_add(1);
                continue;
            }
            const double closed = index_discounted(task.model, task.beta, Belief{pi}).w;
            worst.update(std::fabs(closed - oracle.w));
        }
        cpu_ms.fetch_add(static_cast<std::uint64_t>(seconds_since(task_t0) * 1000.0));
    });

    CheckResult res;
    res.name = "closed-form vs oracle index";
    res.cpu_seconds = static_cast<double>(cpu_ms.load()) / 1000.0;
    const double gap = worst.value();
    const bool in_budget = res.cpu_seconds < 300.0;
    res.pass = gap <= 5e-3 && no_crossings.load() == 0 && in_budget;
    res.detail = "max |closed - oracle| = " + fmt(gap) + " (tol 5e-3), no-crossing count " +
                 std::to_string(no_crossings.load()) + ", single-core work " +
                 fmt(res.cpu_seconds) + "s (budget 300s), wall " + fmt(seconds_since(t0)) + "s";
    return res;
}

CheckResult check_threshold_structure(const Options& options) {
    std::atomic<int> violations{0};
    std::atomic<std::uint64_t> cpu_ms{0};
    struct Task {
        ArmModel model;
        double beta;
    };
    std::vector<Task> tasks;
    for (Family fam : kFamilies)
        for (const auto& m : battery(fam, options.models_per_family, options.battery_seed))
            for (double beta : options.betas) tasks.push_back({m, beta});

    parallel_for(tasks.size(), [&](std::size_t ti) {
        const auto task_t0 = clock_type::now();
        const auto& [model, beta] = tasks[ti];
        const auto range = subsidy_bounds(model, Criterion::discounted(beta));
        ValueIterationSolver solver(model, beta, options.grid_size);
        for (int i = 0; i < options.threshold_lambda_points; ++i) {
            const double lambda =
                range.lambda_low + (range.lambda_high - range.lambda_low) * i /
                                       (options.threshold_lambda_points - 1.0);
            const auto th = optimal_threshold(solver, lambda, 1e-10);
            if (!th.single_switch) violations.fetch_add(1);
        }
        cpu_ms.fetch_add(static_cast<std::uint64_t>(seconds_since(task_t0) * 1000.0));
    });

    CheckResult res;
    res.name = "single-threshold structure";
    res.cpu_seconds = static_cast<double>(cpu_ms.load()) / 1000.0;
    res.pass = violations.load() == 0;
    res.detail = std::to_string(violations.load()) + " multi-switch tables (zero allowed) across " +
                 std::to_string(tasks.size() * options.threshold_lambda_points) + " subsidies";
    return res;
}

CheckResult check_indexability(const Options& options) {
    std::atomic<int> failures{0};
    std::atomic<std::uint64_t> cpu_ms{0};
    struct Task {
        ArmModel model;
        double beta;
    };
    std::vector<Task> tasks;
    for (Family fam : kFamilies)
        for (const auto& m : battery(fam, options.models_per_family, options.battery_seed))
            for (double beta : options.betas) tasks.push_back({m, beta});

    parallel_for(tasks.size(), [&](std::size_t ti) {
        const auto task_t0 = clock_type::now();
        const auto& [model, beta] = tasks[ti];
        const auto report =
            indexability_audit(model, beta, options.audit_lambda_points, options.grid_size, 1e-10);
        if (!report.pass) failures.fetch_add(1);
        cpu_ms.fetch_add(static_cast<std::uint64_t>(seconds_since(task_t0) * 1000.0));
    });

    CheckResult res;
    res.name = "indexability (threshold monotone in the subsidy)";
    res.cpu_seconds = static_cast<double>(cpu_ms.load()) / 1000.0;
    res.pass = failures.load() == 0;
    res.detail = std::to_string(failures.load()) + " failing audits of " +
                 std::to_string(tasks.size()) + " (" +
                 std::to_string(options.audit_lambda_points) + "-point sweeps)";
    return res;
}

CheckResult check_value_bounds(const Options& options) {
    GapTracker worst_lipschitz_excess;  // relative to the allowed slack
    GapTracker worst_fd_low;            // negative forward differences
    GapTracker worst_fd_high;           // excess over 1/(1-beta)
    std::atomic<std::uint64_t> cpu_ms{0};
    struct Task {
        ArmModel model;
        double beta;
    };
    std::vector<Task> tasks;
    for (Family fam : kFamilies)
        for (const auto& m : battery(fam, options.models_per_family, options.battery_seed))
            for (double beta : options.betas) tasks.push_back({m, beta});

    parallel_for(tasks.size(), [&](std::size_t ti) {
        const auto task_t0 = clock_type::now();
        const auto& [model, beta] = tasks[ti];
        const double span = model.rho1 - model.rho0;
        const double h = 1.0 / (options.grid_size - 1);
        const auto range = subsidy_bounds(model, Criterion::discounted(beta));
        const double dl = 1e-3;
        ValueIterationSolver a(model, beta, options.grid_size);
        ValueIterationSolver b(model, beta, options.grid_size);
        for (double frac : {0.25, 0.5, 0.75}) {
            const double lambda =
                range.lambda_low + frac * (range.lambda_high - range.lambda_low);
            a.solve(lambda, 1e-10);
            const int n1 = a.sweeps();
            b.solve(lambda + dl, 1e-10);
            const int sweeps = std::max(n1, b.sweeps()) + 8;
            a.iterate_exactly(lambda, sweeps);
            b.iterate_exactly(lambda + dl, sweeps);
            const ValueTable ta = a.table();
            const ValueTable tb = b.table();

            // all-pairs Lipschitz bound via running extrema of v +- span*pi
            const double slack = 2.0 * h * span;
            double max_f = -1e300, min_g = 1e300;
            for (std::size_t i = 0; i < ta.grid.size(); ++i) {
                const double f = ta.v[i] + span * ta.grid[i];  // decreasing violations
                const double g = ta.v[i] - span * ta.grid[i];  // increasing violations
                if (max_f > -1e300)
                    worst_lipschitz_excess.update(max_f - f - slack);
                if (min_g < 1e300)
                    worst_lipschitz_excess.update(g - min_g - slack);
                max_f = std::max(max_f, f);
                min_g = std::min(min_g, g);
            }
            // forward difference in lambda: exactly coupled sweeps keep it
            // nonnegative; convexity bounds it by 1/(1-beta)
            for (std::size_t i = 0; i < ta.v.size(); ++i) {
                const double fd = (tb.v[i] - ta.v[i]) / dl;
                worst_fd_low.update(-fd);
                worst_fd_high.update(fd - 1.0 / (1.0 - beta) - 1e-6);
            }
        }
        cpu_ms.fetch_add(static_cast<std::uint64_t>(seconds_since(task_t0) * 1000.0));
    });

    CheckResult res;
    res.name = "Lipschitz and subsidy-derivative bounds";
    res.cpu_seconds = static_cast<double>(cpu_ms.load()) / 1000.0;
    res.pass = worst_lipschitz_excess.value() <= 0.0 && worst_fd_low.value() <= 0.0 &&
               worst_fd_high.value() <= 0.0;
    res.detail = "worst Lipschitz excess " + fmt(worst_lipschitz_excess.value()) +
                 ", worst dV/dlambda below 0 " + fmt(worst_fd_low.value()) +
                 ", worst excess over 1/(1-beta) " + fmt(worst_fd_high.value()) +
                 " (all must be <= 0)";
    return res;
}

CheckResult check_vanishing_discount(const Options& options) {
    const double sweep[] = {0.9, 0.99, 0.999, 0.9999};
    const auto pis = pi_lattice();
    GapTracker worst_identity;   // base-B algebraic identity error
    GapTracker worst_final_gap;  // base-A gap at beta = 0.9999
    GapTracker worst_monotone;   // positive = gap grew along the sweep
    const auto t0 = clock_type::now();

    for (const auto& m : battery(Family::BaseB, options.models_per_family, options.battery_seed)) {
        for (double beta : sweep) {
            for (double pi : pis) {
                const double w = index_discounted(m, beta, Belief{pi}).w;
                const double lhs = std::fabs(w - m.rho1);
                const double rhs = (1.0 - beta) * (m.rho1 - m.rho0) * pi;
                worst_identity.update(std::fabs(lhs - rhs));
            }
        }
    }
    for (const auto& m : battery(Family::BaseA, options.models_per_family, options.battery_seed)) {
        for (double pi : pis) {
            const double avg = index_average(m, Belief{pi}).w;
            double prev = 1e300;
            for (double beta : sweep) {
                const double gap = std::fabs(index_discounted(m, beta, Belief{pi}).w - avg);
                worst_monotone.update(gap - prev - 1e-12);
                prev = gap;
            }
            worst_final_gap.update(prev);
        }
    }

    CheckResult res;
    res.name = "vanishing-discount consistency";
    res.cpu_seconds = seconds_since(t0);
    res.pass = worst_identity.value() <= 1e-12 && worst_final_gap.value() <= 5e-2 &&
               worst_monotone.value() <= 0.0;
    res.detail = "base-B identity error " + fmt(worst_identity.value()) +
                 " (tol 1e-12); base-A |W_0.9999 - W_avg| = " + fmt(worst_final_gap.value()) +
                 " (tol 5e-2); worst gap increase along beta " + fmt(worst_monotone.value()) +
                 " (must be <= 0)";
    return res;
}

CheckResult check_five_arm_catalogs(const Options& options) {
    const auto t0 = clock_type::now();
    auto run = [&](char which) {
        SimConfig c = presets::five_arms(which);
        c.horizon = options.five_arm_horizon;
        for (int s = 0; s < options.five_arm_seeds; ++s) c.seeds.push_back(1000 + s);
        return run_batch(c, {PolicyKind::Whittle, PolicyKind::Myopic});
    };
    const auto a = run('a');
    const auto b = run('b');
    const auto c = run('c');

    const double rel_gap_a =
        std::fabs(a[0].final_mean - a[1].final_mean) / a[1].final_mean;
    const bool pass_a = rel_gap_a <= 0.05;

    const double plays_w = b[0].mean_play_counts[4];
    const double plays_m = b[1].mean_play_counts[4];
    const bool pass_b = plays_w < plays_m;

    const double sep = c[0].final_mean - c[1].final_mean;
    const double need = 1.645 * std::hypot(c[0].final_stderr, c[1].final_stderr);
    const bool pass_c = sep >= need && sep >= 0.0;

    CheckResult res;
    res.name = "five-arm catalog reproductions";
    res.cpu_seconds = seconds_since(t0);
    res.pass = pass_a && pass_b && pass_c;
    res.detail = std::string("(a) |gap|/myopic = ") + fmt(rel_gap_a) + " <= 0.05: " +
                 (pass_a ? "ok" : "FAIL") + "; (b) type-B plays whittle " + fmt(plays_w) +
                 " vs myopic " + fmt(plays_m) + ", whittle fewer: " + (pass_b ? "ok" : "FAIL") +
                 "; (c) separation " + fmt(sep) + " >= " + fmt(need) + ": " +
                 (pass_c ? "ok" : "FAIL");
    return res;
}

CheckResult check_large_catalog_trend(const Options& options) {
    const auto t0 = clock_type::now();
    auto run = [&](int n, int n_b) {
        SimConfig c;
        c.arms = generate_random_arms(n, n_b, options.catalog_seed);
        c.initial_beliefs.assign(n, 0.4);
        c.criterion = Criterion::discounted(0.99);
        c.horizon = options.large_n_horizon;
        for (int s = 0; s < options.large_n_seeds; ++s) c.seeds.push_back(500 + s);
        return run_batch(c, {PolicyKind::Whittle, PolicyKind::Myopic});
    };
    const auto small = run(10, 1);
    const auto large = run(200, 10);
    const double gain_small = (small[0].final_mean - small[1].final_mean) / small[1].final_mean;
    const double gain_large = (large[0].final_mean - large[1].final_mean) / large[1].final_mean;
    const bool pass_order = large[0].final_mean >= large[1].final_mean;
    const bool pass_trend = gain_large <= gain_small;

    CheckResult res;
    res.name = "large-catalog trend";
    res.cpu_seconds = seconds_since(t0);
    res.pass = pass_order && pass_trend;
    res.detail = "N=200 whittle " + fmt(large[0].final_mean) + " vs myopic " +
                 fmt(large[1].final_mean) + " (whittle >= myopic: " +
                 (pass_order ? "ok" : "FAIL") + "); relative gain N=200 " + fmt(gain_large) +
                 " <= gain N=10 " + fmt(gain_small) + ": " + (pass_trend ? "ok" : "FAIL");
    return res;
}

CheckResult check_learning(const Options& options) {
    const auto t0 = clock_type::now();
    LearningConfig lc = presets::shared_rho1_learning();
    lc.horizon = options.learn_horizon;
    for (int s = 0; s < options.learn_seeds; ++s) lc.seeds.push_back(7000 + s);
    const LearningReport rep = learning_report(lc);

    double min_mass = 1.0;
    for (double m : rep.mean_mass_on_true.back()) min_mass = std::min(min_mass, m);
    const bool pass_mass = min_mass > 0.8;

    const double regret = rep.regret_vs_oracle.back();
    const double random_regret = rep.mean_oracle_cum.back() - rep.mean_random_cum.back();
    const bool pass_regret = regret < 0.75 * random_regret;

    CheckResult res;
    res.name = "Thompson-sampling learning";
    res.cpu_seconds = seconds_since(t0);
    res.pass = pass_mass && pass_regret;
    std::string masses;
    for (double m : rep.mean_mass_on_true.back()) masses += " " + fmt(m);
    res.detail = "final mass on truth per arm:" + masses + " (all > 0.8: " +
                 (pass_mass ? "ok" : "FAIL") + "); regret " + fmt(regret) + " < 0.75 x " +
                 fmt(random_regret) + " = " + fmt(0.75 * random_regret) + ": " +
                 (pass_regret ? "ok" : "FAIL");
    return res;
}

CheckResult check_core_identities(const Options& options) {
    const auto t0 = clock_type::now();
    SplitMix64 rng(options.battery_seed ^ 0x1DE);

    // derived_belief == iterated passive update
    double worst_belief = 0.0;
    for (int rep = 0; rep < 3000; ++rep) {
        const double p = 0.05 + 0.9 * rng.next_double();
        const double pi0 = rng.next_double();
        const long k = static_cast<long>(rng.next_double() * 60);
        for (ArmKind kind : {ArmKind::TypeA, ArmKind::TypeB}) {
            auto m = ArmModel::base(kind, p, 0.1, 0.7);
            Belief it{pi0};
            for (long j = 0; j < k; ++j) it = belief_step_passive(m, it);
            worst_belief =
                std::max(worst_belief, std::fabs(derived_belief(kind, p, k, pi0).pi - it.pi));
        }
    }
    const bool pass_belief = worst_belief <= 1e-12;

    // iterative waiting time == floor formula away from tie boundaries
    long floor_mismatches = 0, floor_checked = 0;
    for (int rep = 0; rep < 20000; ++rep) {
        const double p = 0.05 + 0.9 * rng.next_double();
        auto m = ArmModel::base(ArmKind::TypeA, p, 0.1, 0.7);
        const double pi = rng.next_double();
        const double pi_t = 0.001 + 0.998 * rng.next_double();
        long formula;
        if (pi < pi_t) {
            formula = 0;
        } else {
            const double ratio = std::log(pi_t / pi) / std::log(1.0 - p);
            if (std::fabs(ratio - std::round(ratio)) < 1e-9) continue;
            formula = static_cast<long>(std::floor(ratio)) + 1;
        }
        const auto k = waiting_time(m, Belief{pi}, pi_t);
        ++floor_checked;
        if (!k.has_value() || *k != formula) ++floor_mismatches;
    }
    const bool pass_floor = floor_mismatches == 0 && floor_checked > 10000;

    // dual-speed iterates reach q/(p+q) within 1e-8 in 200 steps
    double worst_gamma = 0.0;
    for (const auto& m : battery(Family::DualA, options.models_per_family, options.battery_seed)) {
        for (double start : {0.0, 0.33, 0.9, 1.0}) {
            Belief x{start};
            for (int k = 0; k < 200; ++k) x = belief_step_passive(m, x);
            worst_gamma = std::max(worst_gamma, std::fabs(x.pi - gamma_infinity(m)));
        }
    }
    const bool pass_gamma = worst_gamma <= 1e-8;

    // W_avg(1) == rho0 is the historically reported value for this identity.
    // The vanishing-discount limit (enforced by the consistency check above)
    // gives rho0 + p (rho0 - rho1) instead, so this clause is expected to
    // fail; it is asserted exactly as stated to document the discrepancy.
    bool pass_w1 = true;
    double worst_w1 = 0.0;
    for (const auto& m : battery(Family::BaseA, options.models_per_family, options.battery_seed)) {
        const double w1 = index_average(m, Belief{1.0}).w;
        if (w1 != m.rho0) pass_w1 = false;
        worst_w1 = std::max(worst_w1, std::fabs(w1 - m.rho0));
    }

    CheckResult res;
    res.name = "core identities";
    res.cpu_seconds = seconds_since(t0);
    res.pass = pass_belief && pass_floor && pass_gamma && pass_w1;
    res.detail = "derived-belief identity err " + fmt(worst_belief) + " (<= 1e-12: " +
                 (pass_belief ? "ok" : "FAIL") + "); waiting-time floor mismatches " +
                 std::to_string(floor_mismatches) + " of " + std::to_string(floor_checked) + ": " +
                 (pass_floor ? "ok" : "FAIL") + "; gamma-iterate err " + fmt(worst_gamma) +
                 " (<= 1e-8: " + (pass_gamma ? "ok" : "FAIL") +
                 "); W_avg(1) == rho0 exactly: " + (pass_w1 ? "ok" : "FAIL") +
                 " (measured offset " + fmt(worst_w1) + " = p*(rho1-rho0), the beta->1 limit)";
    return res;
}

std::vector<CheckResult> run_criterion(int number, const Options& options) {
    switch (number) {
        case 1: return {check_oracle_agreement(options)};
        case 2: return {check_threshold_structure(options)};
        case 3: return {check_indexability(options)};
        case 4: return {check_value_bounds(options)};
        case 5: return {check_vanishing_discount(options)};
        case 6: return {check_five_arm_catalogs(options)};
        case 7: return {check_large_catalog_trend(options)};
        case 8: return {check_learning(options)};
        case 9: return {check_core_identities(options)};
        default: throw std::invalid_argument("criterion number must be 1..9");
    }
}

std::vector<CheckResult> run_all(const Options& options) {
    std::vector<CheckResult> out;
    for (int i = 1; i <= 9; ++i) {
        auto r = run_criterion(i, options);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

}  // namespace whittle::verify
