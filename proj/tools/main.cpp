// mlt: command-line front end for the memoryless trust simulator.

#include "mlt/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace mlt;

    CLI::App app{"Just-in-time memoryless trust for crowdsourced IoT services"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string experiment = "full";
    std::size_t replications = 0;
    std::string seed_text;
    std::string format = "csv";
    std::string out_path;
    unsigned jobs = 0;

    auto* run = app.add_subcommand("run", "Run an experiment over a scenario and emit results");
    run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    run->add_option("--experiment", experiment, "ablation | count-sweep | estimator-compare | full");
    run->add_option("--replications", replications, "Replications per sweep point (default: scenario file)");
    run->add_option("--seed", seed_text, "Master seed (u64); overrides MLT_SEED and the file");
    run->add_option("--format", format, "csv | json | table");
    run->add_option("--out", out_path, "Output path (default: stdout)");
    run->add_option("--jobs", jobs, "Worker threads for replications (default: logical cores)");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a scenario file against every model invariant");
    validate->add_option("path", validate_path, "Scenario JSON file")->required();

    std::string perturb;
    auto* examples = app.add_subcommand("paper-examples", "Check the worked trust examples (golden values)");
    examples->add_option("--perturb", perturb, "Negative control: shift one expected constant")
        ->group("");  // hidden

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kOk : cli::kConfigError;
    }

    if (*run) {
        cli::RunConfig config;
        config.scenario = scenario_path;
        const auto kind = parse_experiment_kind(experiment);
        if (!kind) {
            std::cerr << "error: unknown experiment '" << experiment << "'\n";
            return cli::kConfigError;
        }
        config.experiment = *kind;
        const auto fmt = cli::parse_format(format);
        if (!fmt) {
            std::cerr << "error: unknown format '" << format << "'\n";
            return cli::kConfigError;
        }
        config.format = *fmt;
        if (run->count("--replications") > 0) {
            if (replications < 1) {
                std::cerr << "error: --replications must be >= 1\n";
                return cli::kConfigError;
            }
            config.replications = replications;
        }
        if (!seed_text.empty()) {
            config.seed = cli::parse_seed(seed_text);
            if (!config.seed) {
                std::cerr << "error: --seed must be an unsigned 64-bit integer\n";
                return cli::kConfigError;
            }
        }
        if (!out_path.empty()) config.out = out_path;
        config.jobs = jobs;
        return cli::cmd_run(config, std::cout, std::cerr);
    }
    if (*validate) {
        return cli::cmd_validate(validate_path, std::cout, std::cerr);
    }
    cli::PaperExampleOptions options;
    if (!perturb.empty()) options.perturb = perturb;
    return cli::cmd_paper_examples(options, std::cout);
}
