#include <CLI11.hpp>
#include <iostream>

#include "whittle/cli.hpp"

using namespace whittle;

namespace {

// Shared config/override plumbing for the subcommands that consume a file.
struct CommonArgs {
    std::string config_path;
    double beta = -1.0;
    bool average = false;
    std::vector<std::uint64_t> seeds;
    std::string out_path;
    long horizon = -1;
    bool svg = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
    auto* opt = cmd->add_option("--config", args.config_path, "experiment config (JSON)");
    if (config_required) opt->required();
    cmd->add_option("--beta", args.beta, "override: discounted criterion with this beta");
    cmd->add_flag("--average", args.average, "override: average-reward criterion");
    cmd->add_option("--seed", args.seeds, "override: replace the seed list");
    cmd->add_option("--out", args.out_path, "override: output path prefix");
    cmd->add_option("--horizon", args.horizon, "override: steps per episode");
    cmd->add_flag("--svg", args.svg, "also emit an SVG chart");
}

ExperimentConfig load_with_overrides(const CommonArgs& args) {
    ExperimentConfig cfg = load_config(args.config_path);
    if (args.beta > 0.0 && args.average) throw ConfigError("criterion", "--beta conflicts with --average");
    if (args.beta > 0.0) cfg.criterion = Criterion::discounted(args.beta);
    if (args.average) cfg.criterion = Criterion::average_reward();
    if (!args.seeds.empty()) cfg.seeds = args.seeds;
    if (!args.out_path.empty()) cfg.output = args.out_path;
    if (args.horizon >= 0) cfg.horizon = args.horizon;
    if (args.svg) cfg.svg = true;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hidden-Markov restless-bandit toolkit: Whittle indices, value tables, "
                 "policy simulation and Thompson-sampling learning"};
    app.require_subcommand(1);

    CommonArgs index_args;
    std::vector<double> pis = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::string index_csv;
    auto* index_cmd = app.add_subcommand("index", "print Whittle indices per arm and belief");
    add_common(index_cmd, index_args);
    index_cmd->add_option("--pi", pis, "belief points");
    index_cmd->add_option("--csv", index_csv, "also write the table as CSV");

    CommonArgs value_args;
    int value_arm = 1, value_grid = 2001;
    double value_lambda = 0.0;
    auto* value_cmd = app.add_subcommand("value", "value-iteration table for one arm and subsidy");
    add_common(value_cmd, value_args);
    value_cmd->add_option("--arm", value_arm, "arm number (1-based)");
    value_cmd->add_option("--lambda", value_lambda, "subsidy")->required();
    value_cmd->add_option("--grid", value_grid, "belief grid size");

    CommonArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "run the configured policies over all seeds");
    add_common(sim_cmd, sim_args);

    CommonArgs learn_args;
    auto* learn_cmd = app.add_subcommand("learn", "Thompson-sampling parameter learning runs");
    add_common(learn_cmd, learn_args);

    std::string suite = "all";
    bool verify_full = false;
    auto* verify_cmd = app.add_subcommand("verify", "seeded verification suites");
    verify_cmd->add_option("suite", suite,
                           "lipschitz | threshold | indexability | oracle | vanishing-discount | all");
    verify_cmd->add_flag("--full", verify_full, "acceptance-sized battery");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kExitUsage;
    }

    try {
        if (index_cmd->parsed())
            return cli::cmd_index(load_with_overrides(index_args), pis, index_csv, std::cout);
        if (value_cmd->parsed())
            return cli::cmd_value(load_with_overrides(value_args), value_arm, value_lambda,
                                  value_grid, std::cout);
        if (sim_cmd->parsed()) return cli::cmd_simulate(load_with_overrides(sim_args), std::cout);
        if (learn_cmd->parsed()) return cli::cmd_learn(load_with_overrides(learn_args), std::cout);
        if (verify_cmd->parsed()) return cli::cmd_verify(suite, verify_full, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitVerifyFailure;
    }
    return cli::kExitUsage;
}
