#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sparseclass/cli_io.hpp"
#include "sparseclass/exact.hpp"
#include "sparseclass/experiments.hpp"

using namespace sparseclass;

int main(int argc, char** argv) {
    CLI::App app{"Sparse-sample binary classification over large alphabets: Monte Carlo error "
                 "estimation, exponent fitting, and exact coincidence-probability oracles"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    CliOverrides overrides;
    std::optional<std::uint64_t> seed_flag;
    std::optional<unsigned> threads_flag;
    std::optional<double> confidence_flag;

    const auto add_common = [&](CLI::App* cmd, bool with_out) {
        cmd->add_option("--seed", seed_flag, "Master seed (overrides the config value)");
        cmd->add_option("--threads", threads_flag,
                        "Worker threads (0 = auto; SPARSECLASS_THREADS also honored)");
        cmd->add_option("--confidence", confidence_flag, "Confidence level for intervals");
        if (with_out) cmd->add_option("--out", overrides.out_dir, "Output directory");
        cmd->add_flag("--log10", overrides.log10, "Report log values in base 10");
    };

    std::string config_path;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo error estimates over a grid");
    simulate->add_option("--config", config_path, "Config file (key = value)")->required();
    add_common(simulate, true);

    auto* sweep = app.add_subcommand("sweep", "Grid estimates plus a generalized-exponent fit");
    sweep->add_option("--config", config_path, "Config file (key = value)")->required();
    add_common(sweep, true);

    ExactArgs exact_args;
    auto* exact = app.add_subcommand("exact", "Closed-form and DP coincidence probabilities");
    exact->add_option("--which", exact_args.which, "One of: A, B, Cn, distinct")->required();
    exact->add_option("--m", exact_args.m, "Alphabet size");
    exact->add_option("--N", exact_args.N, "Training sample size");
    exact->add_option("--n", exact_args.n, "Test sample size");
    exact->add_option("--s", exact_args.s, "Excluded support size (which=B)");
    exact->add_option("--epsilon", exact_args.epsilon, "Bi-uniform separation (which=A)");
    exact->add_option("--dist", exact_args.dist_path, "Distribution file (which=distinct)");
    add_common(exact, true);

    BoundsArgs bounds_args;
    auto* bounds = app.add_subcommand("bounds", "Quadratic log-MGF bound and exponent guarantee");
    bounds->add_option("--epsilon", bounds_args.epsilon, "l1 separation")->required();
    bounds->add_option("--c-bar", bounds_args.c_bar, "Rarity constant")->required();
    bounds->add_option("--m", bounds_args.m, "Alphabet size")->required();
    bounds->add_option("--N", bounds_args.N, "Training sample size")->required();
    bounds->add_option("--n", bounds_args.n, "Test sample size")->required();
    bounds->add_option("--gamma", bounds_args.gamma, "Numeric gamma or 'optimize' (default)");
    bounds->add_option("--pi", bounds_args.pi_path, "Distribution file for pi (default uniform)");
    bounds->add_option("--mu", bounds_args.mu_path,
                       "Distribution file for mu (default bi-uniform at epsilon)");
    bounds->add_option("--nu", bounds_args.nu_choice, "Test-leg distribution: pi, mu or uniform");
    bounds->add_option("--nu-file", bounds_args.nu_path, "Distribution file for nu");
    add_common(bounds, true);

    CounterexampleArgs ce_args;
    auto* counterexample =
        app.add_subcommand("counterexample", "Conditioned training-spike experiment for the l2 classifier");
    counterexample->add_option("--m", ce_args.m, "Alphabet size (even)")->required();
    counterexample->add_option("--N", ce_args.N, "Training sample size")->required();
    counterexample->add_option("--n", ce_args.n, "Test sample size")->required();
    counterexample->add_option("--epsilon", ce_args.epsilon, "Bi-uniform separation")->required();
    counterexample->add_option("--trials", ce_args.trials, "Monte Carlo trials")->required();
    add_common(counterexample, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    overrides.seed = seed_flag;
    overrides.threads = threads_flag;
    overrides.confidence = confidence_flag;

    try {
        if (simulate->parsed()) return cmd_simulate(config_path, overrides);
        if (sweep->parsed()) return cmd_sweep(config_path, overrides);
        if (exact->parsed()) return cmd_exact(exact_args, overrides);
        if (bounds->parsed()) return cmd_bounds(bounds_args, overrides);
        if (counterexample->parsed()) return cmd_counterexample(ce_args, overrides);
    } catch (const AllCensoredError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const DegenerateGridError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitConfig;
}
