#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cbsim/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Bandit regret-minimization simulator: batched and collaborative models"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a configured experiment");
    std::string config_path;
    std::string experiment_override, out_override;
    std::uint64_t seed = 0;
    long long trials = 0;
    int threads = 0;
    run->add_option("--config", config_path, "JSON config file")->required();
    run->add_option("--seed", seed, "Override master seed");
    run->add_option("--trials", trials, "Override trial count");
    run->add_option("--threads", threads, "Override worker thread count");
    run->add_option("--out", out_override, "Override output directory");
    run->add_option("--experiment", experiment_override, "Override experiment kind");

    CLI11_PARSE(app, argc, argv);

    try {
        cbsim::ExperimentConfig config = cbsim::load_config(config_path);
        if (run->count("--seed")) config.master_seed = seed;
        if (run->count("--trials")) config.trials = trials;
        if (run->count("--threads")) config.threads = threads;
        if (!out_override.empty()) config.out_dir = out_override;
        if (!experiment_override.empty())
            config.kind = cbsim::experiment_kind_from(experiment_override);
        config.validate();

        const int status = cbsim::run_experiment(config);
        std::cout << "wrote " << config.out_dir << "/{trials.csv,aggregate.csv,summary.txt}"
                  << (status == 0 ? "" : " (assertion failures, see summary)") << "\n";
        return status;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
