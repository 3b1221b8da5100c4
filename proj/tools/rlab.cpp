// rlab: numerical experiments on exactly-iterable dynamical systems --
// return times, pointwise dimensions, correlation decay, repetition-time
// entropy, and a verification harness tying them together.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rlab/errors.hpp"
#include "rlab/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPredictionFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    unsigned threads = 0;
    bool threads_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config file (TOML)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_dir, "output directory (default: config out_dir)");
    cmd->add_option("--seed", args.seed, "override the master seed")
        ->each([&](const std::string&) { args.seed_set = true; });
    cmd->add_option("--threads", args.threads, "worker count (0 = hardware)")
        ->each([&](const std::string&) { args.threads_set = true; });
}

int run(rlab::ExperimentKind kind, const CommonArgs& args) {
    rlab::ExperimentConfig cfg = rlab::load_config(args.config_path);
    if (args.seed_set) cfg.master_seed = args.seed;
    if (args.threads_set) cfg.threads = args.threads;
    const std::string out_dir = args.out_dir.empty() ? cfg.out_dir : args.out_dir;

    const auto summary = rlab::write_experiment(kind, cfg, out_dir);
    std::cout << summary.dump(2) << "\n";

    if (kind == rlab::ExperimentKind::verify && !summary.value("overall_pass", false))
        return kExitPredictionFailure;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for recurrence, dimension, mixing and entropy"};
    app.require_subcommand(1);

    const std::pair<const char*, rlab::ExperimentKind> kinds[] = {
        {"recurrence", rlab::ExperimentKind::recurrence},
        {"dimension", rlab::ExperimentKind::dimension},
        {"correlation", rlab::ExperimentKind::correlation},
        {"entropy", rlab::ExperimentKind::entropy},
        {"partition", rlab::ExperimentKind::partition},
        {"longfly", rlab::ExperimentKind::longfly},
        {"validate", rlab::ExperimentKind::validate},
        {"verify", rlab::ExperimentKind::verify},
    };

    CommonArgs args[std::size(kinds)];
    for (std::size_t i = 0; i < std::size(kinds); ++i) {
        auto* cmd = app.add_subcommand(kinds[i].first);
        add_common(cmd, args[i]);
    }

    CLI11_PARSE(app, argc, argv);

    for (std::size_t i = 0; i < std::size(kinds); ++i) {
        if (!app.get_subcommand(kinds[i].first)->parsed()) continue;
        try {
            return run(kinds[i].second, args[i]);
        } catch (const rlab::usage_error& e) {
            std::cerr << "usage error: " << e.what() << "\n";
            return kExitUsage;
        } catch (const rlab::capacity_error& e) {
            std::cerr << "capacity error: " << e.what() << "\n";
            return kExitCapacity;
        } catch (const rlab::insufficient_data_error& e) {
            std::cerr << "insufficient data: " << e.what() << "\n";
            return kExitCapacity;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitUsage;
        }
    }
    return kExitUsage;
}
