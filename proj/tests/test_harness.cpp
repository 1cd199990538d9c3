#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dvqls/harness.hpp"

using namespace dvqls;

namespace {

const char *kConfigText = R"(# small smoke experiment
[problem]
type = ising
qubits = 3
kappa = 0.1
condition = 5
grid = 2
split = uniform
row_graph = path
col_graph = path

[ansatz]
layers = 2

[optimizer]
variant = proposed
eta = 0.01
max_iters = 4

[experiment]
trials = 2
seed = 9
init_min = -pi
init_max = pi
)";

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ExperimentConfig small_config(const std::string &out) {
    ExperimentConfig cfg = parse_config(kConfigText);
    cfg.out_dir = out;
    return cfg;
}

} // namespace

TEST_CASE("config parsing") {
    const ExperimentConfig cfg = parse_config(kConfigText);
    CHECK(cfg.problem_type == "ising");
    CHECK(cfg.qubits == 3);
    CHECK(cfg.grid == 2);
    CHECK(cfg.block_qubits() == 2);
    CHECK(cfg.condition == 5.0);
    CHECK(cfg.layers == 2);
    CHECK(cfg.optimizer.max_iters == 4);
    CHECK(cfg.optimizer.gamma1 == 0.9);   // default
    CHECK(cfg.optimizer.gamma2 == 0.999); // default
    CHECK(cfg.optimizer.epsilon == 1e-8); // default
    CHECK(cfg.trials == 2);
    CHECK(cfg.init_min == -std::numbers::pi);
    CHECK(cfg.init_max == std::numbers::pi);
    CHECK(cfg.mode.kind == EstimatorMode::Kind::exact);
}

TEST_CASE("config round trip is field-wise identical") {
    const ExperimentConfig cfg = parse_config(kConfigText);
    const ExperimentConfig back = parse_config(serialize_config(cfg));
    CHECK(config_equal(cfg, back));
}

TEST_CASE("config diagnostics carry field paths") {
    CHECK_THROWS_WITH_AS(parse_config("[problem]\nbogus = 1\n"),
                         doctest::Contains("[problem] bogus"),
                         std::invalid_argument);
    CHECK_THROWS_AS(parse_config("[problem]\nqubits = x\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config("[nope]\nk = v\n"), std::invalid_argument);
    // trials >= 1
    std::string bad(kConfigText);
    bad += "\n[experiment]\ntrials = 0\n";
    CHECK_THROWS_AS(parse_config(bad), std::invalid_argument);
}

TEST_CASE("trajectory CSV schema and round trip") {
    std::vector<RunRecord> records(3);
    for (int k = 0; k < 3; ++k) {
        records[k].iteration = k;
        records[k].residual = 1.0 / (k + 1);
        records[k].consensus_error = 0.5 * k;
        records[k].param_consensus_error = 0.25 * k;
        records[k].wall_time_s = 0.0;
    }
    const std::string text = trajectory_csv(records);
    CHECK(text.rfind("iteration,residual,consensus_error,"
                     "param_consensus_error,wall_time_s\n",
                     0) == 0);
    const auto back = parse_trajectory_csv(text);
    REQUIRE(back.size() == 3);
    CHECK(back[1].residual == records[1].residual);
    CHECK(back[2].param_consensus_error == records[2].param_consensus_error);
}

TEST_CASE("run_experiment writes trials and a consistent summary") {
    const auto out = std::filesystem::temp_directory_path() / "dvqls_test_run";
    std::filesystem::remove_all(out);
    const ExperimentConfig cfg = small_config(out.string());
    const ExperimentResult result = run_experiment(cfg);
    REQUIRE(result.trials.size() == 2);
    REQUIRE(result.trial_files.size() == 2);

    SUBCASE("a single trial reproduces run() exactly") {
        const auto problem =
            std::make_shared<const ProblemInstance>(build_problem(cfg));
        const auto direct =
            run(problem, cfg.ansatz(), cfg.optimizer, cfg.mode, cfg.init_min,
                cfg.init_max, cfg.seed);
        REQUIRE(direct.size() == result.trials[0].size());
        for (size_t k = 0; k < direct.size(); ++k) {
            CHECK(direct[k].residual == result.trials[0][k].residual);
        }
    }

    SUBCASE("mean trajectory equals the mean of the per-trial files") {
        const auto t0 = parse_trajectory_csv(slurp(result.trial_files[0]));
        const auto t1 = parse_trajectory_csv(slurp(result.trial_files[1]));
        std::ifstream sum(result.summary_csv);
        std::string header;
        std::getline(sum, header);
        CHECK(header.rfind("iteration,residual_mean,residual_std", 0) == 0);
        std::string line;
        size_t k = 0;
        while (std::getline(sum, line)) {
            std::istringstream row(line);
            std::string cell;
            std::getline(row, cell, ',');
            std::getline(row, cell, ',');
            const double mean = std::stod(cell);
            CHECK(mean == doctest::Approx(0.5 * (t0[k].residual +
                                                 t1[k].residual))
                              .epsilon(1e-14));
            ++k;
        }
        CHECK(k == t0.size());
    }

    SUBCASE("re-running the same config is byte-identical") {
        const std::string before = slurp(result.trial_files[1]);
        run_experiment(cfg);
        CHECK(slurp(result.trial_files[1]) == before);
    }
    std::filesystem::remove_all(out);
}

TEST_CASE("compare_variants shares seeds and labels columns") {
    const auto out = std::filesystem::temp_directory_path() / "dvqls_test_cmp";
    std::filesystem::remove_all(out);
    ExperimentConfig cfg = small_config(out.string());
    cfg.trials = 1;
    cfg.optimizer.max_iters = 3;
    const CompareResult result = compare_variants(cfg);
    REQUIRE(result.variants.size() == 4);
    CHECK(result.variants[0].label == "Track+AdamX+AdamZ");

    std::ifstream table(result.table_csv);
    std::string header;
    std::getline(table, header);
    CHECK(header == "iteration,Track+AdamX+AdamZ,Track+AdamZ,Track+AdamX,"
                    "Consensus+AdamX+AdamZ");

    const double r0 = result.variants[0].trials[0][0].residual;
    for (const auto &vr : result.variants) {
        CHECK(vr.trials[0][0].residual == r0);
        CHECK(vr.mean_initial_residual == r0);
    }
    std::filesystem::remove_all(out);
}

TEST_CASE("self-check drivers") {
    ExperimentConfig cfg = parse_config(kConfigText);
    const Lemma1CheckResult lemma = run_lemma1(cfg, 5, 1e-8);
    CHECK(lemma.passed);
    const GradcheckResult grad = run_gradcheck(cfg, 2, 1e-5, 1e-6);
    CHECK(grad.passed);
}
