#include "whittle/cli.hpp"

#include <cmath>
#include <iomanip>
#include <map>

#include "whittle/csv.hpp"
#include "whittle/svg.hpp"
#include "whittle/thompson.hpp"
#include "whittle/value_functions.hpp"
#include "whittle/verify.hpp"
#include "whittle/whittle_index.hpp"

namespace whittle::cli {

namespace {

std::string describe(const ArmModel& m) {
    std::string s = "type " + to_string(m.kind) + ", " + to_string(m.variant) +
                    ", p=" + csv_number(m.p);
    if (m.variant == ModelVariant::DualSpeedZero) s += ", q=" + csv_number(m.q);
    s += ", rho0=" + csv_number(m.rho0) + ", rho1=" + csv_number(m.rho1);
    return s;
}

}  // namespace

int cmd_index(const ExperimentConfig& config, const std::vector<double>& pis,
              const std::string& csv_path, std::ostream& out) {
    if (!config.criterion.has_value()) throw ConfigError("criterion", "required for index tables");
    const Criterion crit = *config.criterion;
    for (double pi : pis)
        if (!(pi >= 0.0 && pi <= 1.0)) throw ConfigError("pi", "belief points must lie in [0,1]");

    std::unique_ptr<CsvWriter> csv;
    if (!csv_path.empty()) {
        csv = std::make_unique<CsvWriter>(csv_path);
        csv->row({"arm", "pi", "index", "criterion", "regime"});
    }
    const std::string crit_name = crit.average ? "average" : "beta=" + csv_number(crit.beta);
    out << "Whittle indices (" << crit_name << ")\n";
    for (std::size_t i = 0; i < config.arms.size(); ++i) {
        const ArmModel& m = config.arms[i];
        out << "arm " << i + 1 << " (" << describe(m) << ")\n";
        for (double pi : pis) {
            const IndexResult r = crit.average ? index_average(m, Belief{pi})
                                               : index_discounted(m, crit.beta, Belief{pi});
            out << "  pi=" << csv_number(pi) << "  W=" << csv_number(r.w) << "  [" << r.regime
                << "]\n";
            if (csv)
                csv->row({csv_number(static_cast<long>(i + 1)), csv_number(pi), csv_number(r.w),
                          crit_name, r.regime});
        }
    }
    return kExitOk;
}

int cmd_value(const ExperimentConfig& config, int arm_index, double lambda, int grid_size,
              std::ostream& out) {
    if (!config.criterion.has_value() || config.criterion->average)
        throw ConfigError("criterion", "value tables need a discounted criterion");
    if (arm_index < 1 || arm_index > static_cast<int>(config.arms.size()))
        throw ConfigError("arm", "out of range");
    const ArmModel& m = config.arms[arm_index - 1];
    const double beta = config.criterion->beta;

    const SubsidyRange range = subsidy_bounds(m, *config.criterion);
    out << "arm " << arm_index << " (" << describe(m) << ")\n";
    out << "beta=" << csv_number(beta) << " lambda=" << csv_number(lambda) << "  subsidy bounds ["
        << csv_number(range.lambda_low) << ", " << csv_number(range.lambda_high) << "]\n";

    const ValueTable t = value_iteration(m, beta, lambda, grid_size, 1e-10);
    const ThresholdResult th = optimal_threshold(m, beta, lambda, grid_size, 1e-10);
    switch (th.kind) {
        case ThresholdKind::AlwaysPlay: out << "threshold: always play\n"; break;
        case ThresholdKind::NeverPlay: out << "threshold: never play\n"; break;
        default: out << "threshold: pi_T = " << csv_number(th.pi_t) << "\n";
    }
    out << "single switch: " << (th.single_switch ? "yes" : "NO") << "  (sweeps " << t.sweeps
        << ")\n";
    out << "pi,v,v_play,v_idle\n";
    const std::size_t step = std::max<std::size_t>(1, t.grid.size() / 20);
    for (std::size_t i = 0; i < t.grid.size(); i += step)
        out << csv_number(t.grid[i]) << ',' << csv_number(t.v[i]) << ',' << csv_number(t.v_play[i])
            << ',' << csv_number(t.v_idle[i]) << "\n";
    return kExitOk;
}

int cmd_simulate(const ExperimentConfig& config, std::ostream& out) {
    if (config.output.empty()) throw ConfigError("output", "required for simulate");
    const std::vector<PolicyKind> policies =
        config.policies.empty() ? std::vector<PolicyKind>{PolicyKind::Whittle} : config.policies;

    CsvWriter steps(config.output + "_steps.csv");
    steps.row({"run_id", "seed", "step", "policy", "arm", "reward", "cum_reward"});
    CsvWriter summary(config.output + "_summary.csv");
    summary.row({"policy", "final_mean", "final_stderr"});
    CsvWriter plays(config.output + "_play_counts.csv");
    plays.row({"policy", "arm", "mean_plays"});

    std::vector<SvgSeries> curves;
    long run_id = 0;
    for (PolicyKind policy : policies) {
        const SimConfig sc = config.sim_config(policy);
        // per-step rows come from sequential episode replays; the aggregate
        // curves reuse the parallel batch runner
        for (std::uint64_t seed : sc.seeds) {
            const SimulationTrace tr = run_episode(sc, seed);
            ++run_id;
            for (std::size_t t = 0; t < tr.actions.size(); ++t)
                steps.row({csv_number(run_id), csv_number(seed),
                           csv_number(static_cast<long>(t + 1)), to_string(policy),
                           csv_number(static_cast<long>(tr.actions[t] + 1)),
                           csv_number(static_cast<long>(tr.rewards[t])),
                           csv_number(tr.cumulative[t])});
        }
        const PolicyBatch batch = run_batch(sc);
        summary.row({to_string(policy), csv_number(batch.final_mean),
                     csv_number(batch.final_stderr)});
        for (std::size_t i = 0; i < batch.mean_play_counts.size(); ++i)
            plays.row({to_string(policy), csv_number(static_cast<long>(i + 1)),
                       csv_number(batch.mean_play_counts[i])});
        out << to_string(policy) << ": mean final cumulative reward " << batch.final_mean
            << " +- " << batch.final_stderr << " (" << sc.seeds.size() << " seeds)\n";
        curves.push_back(SvgSeries{to_string(policy), batch.mean_cumulative});
    }
    if (config.svg) {
        write_svg_chart(config.output + "_curves.svg", "mean cumulative reward", curves);
        out << "chart: " << config.output + "_curves.svg" << "\n";
    }
    out << "wrote " << config.output << "_steps.csv, _summary.csv, _play_counts.csv\n";
    return kExitOk;
}

int cmd_learn(const ExperimentConfig& config, std::ostream& out) {
    if (config.output.empty()) throw ConfigError("output", "required for learn");
    const LearningConfig lc = config.learning_config();
    const std::size_t n = lc.true_arms.size();

    CsvWriter steps(config.output + "_learning_steps.csv");
    {
        std::vector<std::string> header = {"run_id", "seed",       "step",
                                           "arm",    "reward",     "cum_reward",
                                           "mismatch", "mismatches_cum"};
        for (std::size_t i = 0; i < n; ++i) header.push_back("mass_true_" + std::to_string(i + 1));
        steps.row(header);
    }
    long run_id = 0;
    for (std::uint64_t seed : lc.seeds) {
        const LearningTrace tr = run_learning(lc, seed);
        ++run_id;
        for (std::size_t t = 0; t < tr.trace.actions.size(); ++t) {
            const long flag = tr.mismatch_cum[t] - (t > 0 ? tr.mismatch_cum[t - 1] : 0);
            std::vector<std::string> row = {
                csv_number(run_id),
                csv_number(seed),
                csv_number(static_cast<long>(t + 1)),
                csv_number(static_cast<long>(tr.trace.actions[t] + 1)),
                csv_number(static_cast<long>(tr.trace.rewards[t])),
                csv_number(tr.trace.cumulative[t]),
                csv_number(flag),
                csv_number(tr.mismatch_cum[t])};
            for (std::size_t i = 0; i < n; ++i) row.push_back(csv_number(tr.mass_on_true[t][i]));
            steps.row(row);
        }
    }

    const LearningReport rep = learning_report(lc);
    CsvWriter series(config.output + "_learning_series.csv");
    {
        std::vector<std::string> header = {"step",           "mean_learner_cum", "mean_oracle_cum",
                                           "mean_random_cum", "regret_vs_oracle", "mean_mismatch"};
        for (std::size_t i = 0; i < n; ++i)
            header.push_back("mean_mass_true_" + std::to_string(i + 1));
        series.row(header);
    }
    for (std::size_t t = 0; t < rep.mean_learner_cum.size(); ++t) {
        std::vector<std::string> row = {
            csv_number(static_cast<long>(t + 1)),    csv_number(rep.mean_learner_cum[t]),
            csv_number(rep.mean_oracle_cum[t]),      csv_number(rep.mean_random_cum[t]),
            csv_number(rep.regret_vs_oracle[t]),     csv_number(rep.mean_mismatch[t])};
        for (std::size_t i = 0; i < n; ++i) row.push_back(csv_number(rep.mean_mass_on_true[t][i]));
        series.row(row);
    }
    if (config.svg) {
        write_svg_chart(config.output + "_learning_curves.svg", "mean cumulative reward",
                        {SvgSeries{"learner", rep.mean_learner_cum},
                         SvgSeries{"oracle", rep.mean_oracle_cum},
                         SvgSeries{"random", rep.mean_random_cum}});
    }
    out << "learner " << rep.mean_learner_cum.back() << ", oracle " << rep.mean_oracle_cum.back()
        << ", random " << rep.mean_random_cum.back() << ", final regret "
        << rep.regret_vs_oracle.back() << "\n";
    out << "final mass on truth per arm:";
    for (double m : rep.mean_mass_on_true.back()) out << ' ' << m;
    out << "\nwrote " << config.output << "_learning_steps.csv, _learning_series.csv\n";
    return kExitOk;
}

int cmd_verify(const std::string& suite, bool full, std::ostream& out) {
    const std::map<std::string, std::vector<int>> suites = {
        {"oracle", {1}},        {"threshold", {2}}, {"indexability", {3}},
        {"lipschitz", {4}},     {"vanishing-discount", {5}},
        {"all", {1, 2, 3, 4, 5}}};
    const auto it = suites.find(suite);
    if (it == suites.end()) {
        out << "unknown suite '" << suite
            << "' (choose: lipschitz, threshold, indexability, oracle, vanishing-discount, all)\n";
        return kExitUsage;
    }
    const verify::Options options = full ? verify::Options{} : verify::Options::quick();
    out << "battery: " << options.models_per_family << " models per family, seed "
        << options.battery_seed << (full ? " (full)" : " (quick; use --full for acceptance sizes)")
        << "\n";
    bool all_pass = true;
    for (int number : it->second) {
        for (const auto& r : verify::run_criterion(number, options)) {
            out << (r.pass ? "PASS" : "FAIL") << "  " << r.name << ": " << r.detail << "\n";
            all_pass = all_pass && r.pass;
        }
    }
    return all_pass ? kExitOk : kExitVerifyFailure;
}

}  // namespace whittle::cli
