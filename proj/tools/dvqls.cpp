// Command-line driver: experiment runs, variant comparison, and the two
// self-check modes (projection identity, gradient finite differences).

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "dvqls/harness.hpp"

namespace {

struct CommonFlags {
    int trials = -1;
    long seed = -1;
    std::string out;
    std::string mode;
    long shots = -1;
};

void add_common(CLI::App *cmd, std::string &config_file, CommonFlags &flags) {
    cmd->add_option("config", config_file, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--trials", flags.trials, "override trial count");
    cmd->add_option("--seed", flags.seed, "override base seed");
    cmd->add_option("--out", flags.out, "override output directory");
    cmd->add_option("--mode", flags.mode, "override estimator mode")
        ->check(CLI::IsMember({"exact", "shots"}));
    cmd->add_option("--shots", flags.shots, "override shots per overlap");
}

dvqls::ExperimentConfig load_with_overrides(const std::string &config_file,
                                            const CommonFlags &flags) {
    dvqls::ExperimentConfig cfg = dvqls::load_config(config_file);
    if (flags.trials >= 0) {
        cfg.trials = flags.trials;
    }
    if (flags.seed >= 0) {
        cfg.seed = static_cast<std::uint64_t>(flags.seed);
    }
    if (!flags.out.empty()) {
        cfg.out_dir = flags.out;
    }
    if (flags.mode == "exact") {
        cfg.mode.kind = dvqls::EstimatorMode::Kind::exact;
    } else if (flags.mode == "shots") {
        cfg.mode.kind = dvqls::EstimatorMode::Kind::shots;
    }
    if (flags.shots >= 0) {
        cfg.mode.num_shots = flags.shots;
    }
    cfg.validate();
    return cfg;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"distributed variational quantum linear solver"};
    app.require_subcommand(1);

    std::string config_file;
    CommonFlags flags;

    CLI::App *run_cmd =
        app.add_subcommand("run", "run the configured experiment");
    add_common(run_cmd, config_file, flags);

    CLI::App *compare_cmd = app.add_subcommand(
        "compare-variants", "run all four update variants with shared seeds");
    add_common(compare_cmd, config_file, flags);

    CLI::App *lemma_cmd = app.add_subcommand(
        "check-lemma1", "projection-identity self-check on the config's system");
    int lemma_draws = 20;
    lemma_cmd->add_option("--draws", lemma_draws, "random x draws");
    add_common(lemma_cmd, config_file, flags);

    CLI::App *grad_cmd = app.add_subcommand(
        "gradcheck", "parameter-shift vs finite-difference gradient check");
    int grad_instances = 10;
    grad_cmd->add_option("--instances", grad_instances, "random instances");
    add_common(grad_cmd, config_file, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        const dvqls::ExperimentConfig cfg =
            load_with_overrides(config_file, flags);

        if (run_cmd->parsed()) {
            const dvqls::ExperimentResult result = dvqls::run_experiment(cfg);
            double mean_final = 0.0;
            for (const auto &t : result.trials) {
                mean_final += t.back().residual;
            }
            mean_final /= static_cast<double>(result.trials.size());
            std::printf("trials: %zu\n", result.trials.size());
            std::printf("mean final residual: %.6e\n", mean_final);
            std::printf("summary: %s\n", result.summary_csv.string().c_str());
            return 0;
        }
        if (compare_cmd->parsed()) {
            const dvqls::CompareResult result = dvqls::compare_variants(cfg);
            for (const auto &vr : result.variants) {
                std::printf("%-24s mean final residual %.6e\n",
                            vr.label.c_str(), vr.mean_final_residual);
            }
            std::printf("table: %s\n", result.table_csv.string().c_str());
            return 0;
        }
        if (lemma_cmd->parsed()) {
            const dvqls::Lemma1CheckResult result =
                dvqls::run_lemma1(cfg, lemma_draws, 1e-8);
            std::printf("draws: %d\nmax deviation: %.3e\n%s\n", result.draws,
                        result.max_deviation,
                        result.passed ? "PASS" : "FAIL");
            return result.passed ? 0 : 1;
        }
        if (grad_cmd->parsed()) {
            const dvqls::GradcheckResult result =
                dvqls::run_gradcheck(cfg, grad_instances, 1e-5, 1e-6);
            std::printf("instances: %d\nmax relative error: %.3e\n%s\n",
                        result.instances, result.max_rel_error,
                        result.passed ? "PASS" : "FAIL");
            return result.passed ? 0 : 1;
        }
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
