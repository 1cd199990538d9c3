// Experiment configuration, multi-trial orchestration, CSV/JSON export,
// and the variant-comparison and self-check drivers behind the CLI.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dvqls/estimator.hpp"
#include "dvqls/metrics.hpp"
#include "dvqls/optimizer.hpp"
#include "dvqls/problems.hpp"

namespace dvqls {

struct ExperimentConfig {
    // [problem]
    std::string problem_type = "ising"; // ising | cluster | scaled_cluster
    int qubits = 4;
    double kappa = 0.1;           // ising transverse coupling
    double condition = 0.0;       // target condition number; 0 = untuned
    int spacing = 3;              // cluster stabilizer spacing
    double cluster_eps = 0.0;     // cluster perturbation strength
    double c1 = 1.0, c2 = 0.2;    // cluster coefficients when untuned
    int grid = 1;                 // m; block_qubits = qubits - log2(m)
    SplitRule split = SplitRule::uniform;
    GraphKind row_graph = GraphKind::path;
    GraphKind col_graph = GraphKind::path;

    // [ansatz]
    int layers = 3;
    bool initial_hadamard = true;

    // [optimizer]
    OptimizerConfig optimizer;

    // [estimator]
    EstimatorMode mode = EstimatorMode::exact();

    // [experiment]
    int trials = 1;
    std::uint64_t seed = 1;
    double init_min = 0.0;
    double init_max = 0.0;
    std::string out_dir = "results";
    bool record_wall_time = false;

    void validate() const;
    int block_qubits() const;
    AnsatzConfig ansatz() const;
};

ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::filesystem::path &file);
std::string serialize_config(const ExperimentConfig &config);
bool config_equal(const ExperimentConfig &a, const ExperimentConfig &b);

// Builds the generator named in the config and partitions it.
ProblemInstance build_problem(const ExperimentConfig &config);

// Seeded random Pauli-sum system (letters I/X/Z, random b-prep circuit)
// for self-check drivers and property tests.
ProblemInstance random_problem(int total_qubits, int block_qubits,
                               GraphKind row_kind, GraphKind col_kind,
                               SplitRule split, std::uint64_t seed);

std::string trajectory_csv(const std::vector<RunRecord> &records);
std::vector<RunRecord> parse_trajectory_csv(const std::string &text);

struct ExperimentResult {
    std::vector<std::vector<RunRecord>> trials;
    std::vector<std::filesystem::path> trial_files;
    std::filesystem::path summary_csv;
    std::filesystem::path summary_json;
};

// Runs config.trials seeded runs (trial k uses seed + k), writing one CSV
// per trial plus mean/std summary trajectories.
ExperimentResult run_experiment(const ExperimentConfig &config);

struct VariantResult {
    Variant variant;
    std::string label;
    std::vector<std::vector<RunRecord>> trials;
    double mean_final_residual = 0.0;
    double mean_initial_residual = 0.0;
};

struct CompareResult {
    std::vector<VariantResult> variants; // proposed first
    std::filesystem::path table_csv;
};

// Runs all four variants with shared per-trial seeds and writes a combined
// mean-residual table.
CompareResult compare_variants(const ExperimentConfig &config);

struct GradcheckResult {
    double max_rel_error = 0.0;
    int instances = 0;
    bool passed = false;
};

// Parameter-shift gradients vs central finite differences of the
// exact-mode cost on seeded random instances.
GradcheckResult run_gradcheck(const ExperimentConfig &config, int instances,
                              double step, double tolerance);

struct Lemma1CheckResult {
    double max_deviation = 0.0;
    int draws = 0;
    bool passed = false;
};

// Projection-identity check on the configured problem with random x draws.
Lemma1CheckResult run_lemma1(const ExperimentConfig &config, int draws,
                             double tolerance);

} // namespace dvqls
