#include "dvqls/harness.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dvqls {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string &s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_real(const std::string &raw, const std::string &field) {
    const std::string v = trim(raw);
    if (v == "pi") {
        return std::numbers::pi;
    }
    if (v == "-pi") {
        return -std::numbers::pi;
    }
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) {
            throw std::invalid_argument("");
        }
        return x;
    } catch (const std::exception &) {
        throw std::invalid_argument(field + ": not a number '" + v + "'");
    }
}

long parse_int(const std::string &raw, const std::string &field) {
    const std::string v = trim(raw);
    try {
        size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) {
            throw std::invalid_argument("");
        }
        return x;
    } catch (const std::exception &) {
        throw std::invalid_argument(field + ": not an integer '" + v + "'");
    }
}

bool parse_bool(const std::string &raw, const std::string &field) {
    const std::string v = trim(raw);
    if (v == "true" || v == "1") {
        return true;
    }
    if (v == "false" || v == "0") {
        return false;
    }
    throw std::invalid_argument(field + ": not a boolean '" + v + "'");
}

std::string variant_name(Variant v) {
    switch (v) {
    case Variant::proposed:
        return "proposed";
    case Variant::track_adamz:
        return "track_adamz";
    case Variant::track_adamx:
        return "track_adamx";
    case Variant::consensus_adamx_adamz:
        return "consensus_adamx_adamz";
    }
    return "?";
}

std::string graph_name(GraphKind k) {
    switch (k) {
    case GraphKind::path:
        return "path";
    case GraphKind::ring:
        return "ring";
    case GraphKind::complete:
        return "complete";
    }
    return "?";
}

void write_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string());
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

MeanStd mean_std(const std::vector<double> &xs) {
    const auto n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) {
        mean += x;
    }
    mean /= n;
    double var = 0.0;
    for (double x : xs) {
        var += (x - mean) * (x - mean);
    }
    return {mean, std::sqrt(var / n)};
}

} // namespace

int ExperimentConfig::block_qubits() const {
    if (grid < 1 || !std::has_single_bit(static_cast<unsigned>(grid))) {
        throw std::invalid_argument("[problem] grid: must be a power of two");
    }
    const int log_m = std::countr_zero(static_cast<unsigned>(grid));
    return qubits - log_m;
}

AnsatzConfig ExperimentConfig::ansatz() const {
    return {block_qubits(), layers, initial_hadamard};
}

void ExperimentConfig::validate() const {
    if (problem_type != "ising" && problem_type != "cluster" &&
        problem_type != "scaled_cluster") {
        throw std::invalid_argument("[problem] type: unknown '" +
                                    problem_type + "'");
    }
    if (qubits < 1 || qubits > 13) {
        throw std::invalid_argument("[problem] qubits: out of range 1..13");
    }
    if (block_qubits() < 1) {
        throw std::invalid_argument(
            "[problem] grid: too fine for the qubit count");
    }
    if (problem_type == "ising" && condition <= 1.0) {
        throw std::invalid_argument(
            "[problem] condition: ising needs a target > 1");
    }
    if (condition != 0.0 && condition <= 1.0) {
        throw std::invalid_argument("[problem] condition: must be > 1 or 0");
    }
    if (layers < 1) {
        throw std::invalid_argument("[ansatz] layers: must be >= 1");
    }
    optimizer.validate();
    if (mode.kind == EstimatorMode::Kind::shots && mode.num_shots < 1) {
        throw std::invalid_argument("[estimator] shots: must be >= 1");
    }
    if (trials < 1) {
        throw std::invalid_argument("[experiment] trials: must be >= 1");
    }
    if (init_min > init_max) {
        throw std::invalid_argument(
            "[experiment] init_min: exceeds init_max");
    }
}

ExperimentConfig parse_config(const std::string &text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw std::invalid_argument("malformed section '" + line + "'");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("malformed line '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string field = "[" + section + "] " + key;

        if (section == "problem") {
            if (key == "type") {
                cfg.problem_type = value;
            } else if (key == "qubits") {
                cfg.qubits = static_cast<int>(parse_int(value, field));
            } else if (key == "kappa") {
                cfg.kappa = parse_real(value, field);
            } else if (key == "condition") {
                cfg.condition = parse_real(value, field);
            } else if (key == "spacing") {
                cfg.spacing = static_cast<int>(parse_int(value, field));
            } else if (key == "eps") {
                cfg.cluster_eps = parse_real(value, field);
            } else if (key == "c1") {
                cfg.c1 = parse_real(value, field);
            } else if (key == "c2") {
                cfg.c2 = parse_real(value, field);
            } else if (key == "grid") {
                cfg.grid = static_cast<int>(parse_int(value, field));
            } else if (key == "split") {
                if (value == "uniform") {
                    cfg.split = SplitRule::uniform;
                } else if (value == "diagonal") {
                    cfg.split = SplitRule::diagonal;
                } else {
                    throw std::invalid_argument(field + ": unknown split");
                }
            } else if (key == "row_graph") {
                cfg.row_graph = parse_graph_kind(value);
            } else if (key == "col_graph") {
                cfg.col_graph = parse_graph_kind(value);
            } else {
                throw std::invalid_argument(field + ": unknown key");
            }
        } else if (section == "ansatz") {
            if (key == "layers") {
                cfg.layers = static_cast<int>(parse_int(value, field));
            } else if (key == "initial_hadamard") {
                cfg.initial_hadamard = parse_bool(value, field);
            } else {
                throw std::invalid_argument(field + ": unknown key");
            }
        } else if (section == "optimizer") {
            if (key == "variant") {
                cfg.optimizer.variant = parse_variant(value);
            } else if (key == "eta") {
                cfg.optimizer.eta = parse_real(value, field);
            } else if (key == "gamma1") {
                cfg.optimizer.gamma1 = parse_real(value, field);
            } else if (key == "gamma2") {
                cfg.optimizer.gamma2 = parse_real(value, field);
            } else if (key == "epsilon") {
                cfg.optimizer.epsilon = parse_real(value, field);
            } else if (key == "eps_stop") {
                cfg.optimizer.eps_stop = parse_real(value, field);
            } else if (key == "max_iters") {
                cfg.optimizer.max_iters = parse_int(value, field);
            } else if (key == "literal_g") {
                cfg.optimizer.literal_g = parse_bool(value, field);
            } else {
                throw std::invalid_argument(field + ": unknown key");
            }
        } else if (section == "estimator") {
            if (key == "mode") {
                if (value == "exact") {
                    cfg.mode.kind = EstimatorMode::Kind::exact;
                } else if (value == "shots") {
                    cfg.mode.kind = EstimatorMode::Kind::shots;
                } else {
                    throw std::invalid_argument(field + ": unknown mode");
                }
            } else if (key == "shots") {
                cfg.mode.num_shots = parse_int(value, field);
            } else if (key == "shot_seed") {
                cfg.mode.rng_seed =
                    static_cast<std::uint64_t>(parse_int(value, field));
            } else {
                throw std::invalid_argument(field + ": unknown key");
            }
        } else if (section == "experiment") {
            if (key == "trials") {
                cfg.trials = static_cast<int>(parse_int(value, field));
            } else if (key == "seed") {
                cfg.seed = static_cast<std::uint64_t>(parse_int(value, field));
            } else if (key == "init_min") {
                cfg.init_min = parse_real(value, field);
            } else if (key == "init_max") {
                cfg.init_max = parse_real(value, field);
            } else if (key == "out") {
                cfg.out_dir = value;
            } else if (key == "record_wall_time") {
                cfg.record_wall_time = parse_bool(value, field);
            } else {
                throw std::invalid_argument(field + ": unknown key");
            }
        } else {
            throw std::invalid_argument("unknown section [" + section + "]");
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open config " + file.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig &cfg) {
    std::ostringstream out;
    out << "[problem]\n";
    out << "type = " << cfg.problem_type << "\n";
    out << "qubits = " << cfg.qubits << "\n";
    out << "kappa = " << fmt(cfg.kappa) << "\n";
    out << "condition = " << fmt(cfg.condition) << "\n";
    out << "spacing = " << cfg.spacing << "\n";
    out << "eps = " << fmt(cfg.cluster_eps) << "\n";
    out << "c1 = " << fmt(cfg.c1) << "\n";
    out << "c2 = " << fmt(cfg.c2) << "\n";
    out << "grid = " << cfg.grid << "\n";
    out << "split = "
        << (cfg.split == SplitRule::uniform ? "uniform" : "diagonal") << "\n";
    out << "row_graph = " << graph_name(cfg.row_graph) << "\n";
    out << "col_graph = " << graph_name(cfg.col_graph) << "\n";
    out << "\n[ansatz]\n";
    out << "layers = " << cfg.layers << "\n";
    out << "initial_hadamard = " << (cfg.initial_hadamard ? "true" : "false")
        << "\n";
    out << "\n[optimizer]\n";
    out << "variant = " << variant_name(cfg.optimizer.variant) << "\n";
    out << "eta = " << fmt(cfg.optimizer.eta) << "\n";
    out << "gamma1 = " << fmt(cfg.optimizer.gamma1) << "\n";
    out << "gamma2 = " << fmt(cfg.optimizer.gamma2) << "\n";
    out << "epsilon = " << fmt(cfg.optimizer.epsilon) << "\n";
    out << "eps_stop = " << fmt(cfg.optimizer.eps_stop) << "\n";
    out << "max_iters = " << cfg.optimizer.max_iters << "\n";
    out << "literal_g = " << (cfg.optimizer.literal_g ? "true" : "false")
        << "\n";
    out << "\n[estimator]\n";
    out << "mode = "
        << (cfg.mode.kind == EstimatorMode::Kind::exact ? "exact" : "shots")
        << "\n";
    out << "shots = " << cfg.mode.num_shots << "\n";
    out << "shot_seed = " << cfg.mode.rng_seed << "\n";
    out << "\n[experiment]\n";
    out << "trials = " << cfg.trials << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "init_min = " << fmt(cfg.init_min) << "\n";
    out << "init_max = " << fmt(cfg.init_max) << "\n";
    out << "out = " << cfg.out_dir << "\n";
    out << "record_wall_time = " << (cfg.record_wall_time ? "true" : "false")
        << "\n";
    return out.str();
}

bool config_equal(const ExperimentConfig &a, const ExperimentConfig &b) {
    return a.problem_type == b.problem_type && a.qubits == b.qubits &&
           a.kappa == b.kappa && a.condition == b.condition &&
           a.spacing == b.spacing && a.cluster_eps == b.cluster_eps &&
           a.c1 == b.c1 && a.c2 == b.c2 && a.grid == b.grid &&
           a.split == b.split && a.row_graph == b.row_graph &&
           a.col_graph == b.col_graph && a.layers == b.layers &&
           a.initial_hadamard == b.initial_hadamard &&
           a.optimizer.variant == b.optimizer.variant &&
           a.optimizer.eta == b.optimizer.eta &&
           a.optimizer.gamma1 == b.optimizer.gamma1 &&
           a.optimizer.gamma2 == b.optimizer.gamma2 &&
           a.optimizer.epsilon == b.optimizer.epsilon &&
           a.optimizer.eps_stop == b.optimizer.eps_stop &&
           a.optimizer.max_iters == b.optimizer.max_iters &&
           a.optimizer.literal_g == b.optimizer.literal_g &&
           a.mode.kind == b.mode.kind &&
           a.mode.num_shots == b.mode.num_shots &&
           a.mode.rng_seed == b.mode.rng_seed && a.trials == b.trials &&
           a.seed == b.seed && a.init_min == b.init_min &&
           a.init_max == b.init_max && a.out_dir == b.out_dir &&
           a.record_wall_time == b.record_wall_time;
}

ProblemInstance build_problem(const ExperimentConfig &cfg) {
    cfg.validate();
    GeneratedSystem sys = [&] {
        if (cfg.problem_type == "ising") {
            return ising_system(cfg.qubits, cfg.kappa, cfg.condition);
        }
        if (cfg.problem_type == "cluster") {
            if (cfg.qubits != 13) {
                throw std::invalid_argument(
                    "[problem] qubits: the cluster system is 13 qubits");
            }
            return cluster_system(cfg.c1, cfg.c2, cfg.cluster_eps);
        }
        // scaled_cluster
        double c1 = cfg.c1;
        double c2 = cfg.c2;
        double eps = cfg.cluster_eps;
        if (cfg.condition > 1.0) {
            const ClusterCoeffs tuned = tune_cluster_coeffs(
                cfg.qubits, cfg.spacing, cfg.cluster_eps, cfg.condition);
            c1 = tuned.c1;
            c2 = tuned.c2;
            eps = tuned.eps;
        }
        return scaled_cluster_system(cfg.qubits, cfg.spacing, c1, c2, eps);
    }();
    return partition(sys.op, sys.b_prep, cfg.block_qubits(), cfg.split,
                     cfg.row_graph, cfg.col_graph);
}

ProblemInstance random_problem(int total_qubits, int block_qubits,
                               GraphKind row_kind, GraphKind col_kind,
                               SplitRule split, std::uint64_t seed) {
    std::mt19937_64 rng(mix_seed(seed, 0xabcdULL));
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_real_distribution<double> angle(-std::numbers::pi,
                                                 std::numbers::pi);
    std::uniform_int_distribution<int> letter(0, 2);
    const char alphabet[] = {'I', 'X', 'Z'};

    std::vector<PauliTerm> terms;
    terms.push_back({1.0 + coeff(rng), std::string(total_qubits, 'I')});
    const int extra = 2 * total_qubits;
    for (int t = 0; t < extra; ++t) {
        std::string s(total_qubits, 'I');
        for (auto &c : s) {
            c = alphabet[letter(rng)];
        }
        terms.push_back({0.5 * coeff(rng), s});
    }
    LcuOperator op(total_qubits, terms);

    Circuit b_prep;
    for (int q = 0; q < total_qubits; ++q) {
        b_prep.push_back({GateOp::Kind::h, q, 0, 0.0});
    }
    for (int q = 0; q < total_qubits; ++q) {
        b_prep.push_back({GateOp::Kind::ry, q, 0, angle(rng)});
    }
    return partition(op, b_prep, block_qubits, split, row_kind, col_kind);
}

std::string trajectory_csv(const std::vector<RunRecord> &records) {
    std::ostringstream out;
    out << "iteration,residual,consensus_error,param_consensus_error,"
           "wall_time_s\n";
    for (const auto &r : records) {
        out << r.iteration << ',' << fmt(r.residual) << ','
            << fmt(r.consensus_error) << ',' << fmt(r.param_consensus_error)
            << ',' << fmt(r.wall_time_s) << '\n';
    }
    return out.str();
}

std::vector<RunRecord> parse_trajectory_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) ||
        trim(line) != "iteration,residual,consensus_error,"
                      "param_consensus_error,wall_time_s") {
        throw std::invalid_argument("trajectory CSV: bad header");
    }
    std::vector<RunRecord> records;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        RunRecord r;
        std::vector<double> vals;
        while (std::getline(row, cell, ',')) {
            vals.push_back(parse_real(cell, "trajectory CSV cell"));
        }
        if (vals.size() != 5) {
            throw std::invalid_argument("trajectory CSV: bad row '" + line +
                                        "'");
        }
        r.iteration = static_cast<long>(vals[0]);
        r.residual = vals[1];
        r.consensus_error = vals[2];
        r.param_consensus_error = vals[3];
        r.wall_time_s = vals[4];
        records.push_back(r);
    }
    return records;
}

namespace {

std::string summary_csv_text(
    const std::vector<std::vector<RunRecord>> &trials) {
    size_t max_len = 0;
    for (const auto &t : trials) {
        max_len = std::max(max_len, t.size());
    }
    std::ostringstream out;
    out << "iteration,residual_mean,residual_std,consensus_error_mean,"
           "consensus_error_std,param_consensus_error_mean,"
           "param_consensus_error_std\n";
    for (size_t k = 0; k < max_len; ++k) {
        std::vector<double> res;
        std::vector<double> cons;
        std::vector<double> pcons;
        long iteration = 0;
        for (const auto &t : trials) {
            if (k < t.size()) {
                iteration = t[k].iteration;
                res.push_back(t[k].residual);
                cons.push_back(t[k].consensus_error);
                pcons.push_back(t[k].param_consensus_error);
            }
        }
        const MeanStd r = mean_std(res);
        const MeanStd c = mean_std(cons);
        const MeanStd p = mean_std(pcons);
        out << iteration << ',' << fmt(r.mean) << ',' << fmt(r.std) << ','
            << fmt(c.mean) << ',' << fmt(c.std) << ',' << fmt(p.mean) << ','
            << fmt(p.std) << '\n';
    }
    return out.str();
}

std::vector<RunRecord> run_trial(const ExperimentConfig &cfg,
                                 const std::shared_ptr<const ProblemInstance>
                                     &problem,
                                 std::uint64_t trial_seed) {
    return run(problem, cfg.ansatz(), cfg.optimizer, cfg.mode, cfg.init_min,
               cfg.init_max, trial_seed, cfg.record_wall_time);
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig &cfg) {
    cfg.validate();
    const auto problem =
        std::make_shared<const ProblemInstance>(build_problem(cfg));
    const std::filesystem::path out_dir(cfg.out_dir);
    std::filesystem::create_directories(out_dir);

    ExperimentResult result;
    for (int k = 0; k < cfg.trials; ++k) {
        auto records =
            run_trial(cfg, problem, cfg.seed + static_cast<std::uint64_t>(k));
        char name[32];
        std::snprintf(name, sizeof(name), "trial_%02d.csv", k);
        const auto file = out_dir / name;
        write_file(file, trajectory_csv(records));
        result.trial_files.push_back(file);
        result.trials.push_back(std::move(records));
    }

    result.summary_csv = out_dir / "summary.csv";
    write_file(result.summary_csv, summary_csv_text(result.trials));

    std::vector<double> finals;
    std::vector<double> initials;
    for (const auto &t : result.trials) {
        initials.push_back(t.front().residual);
        finals.push_back(t.back().residual);
    }
    const MeanStd fin = mean_std(finals);
    const MeanStd ini = mean_std(initials);
    nlohmann::json summary = {
        {"variant", variant_name(cfg.optimizer.variant)},
        {"label", variant_label(cfg.optimizer.variant)},
        {"trials", cfg.trials},
        {"seed", cfg.seed},
        {"iterations", cfg.optimizer.max_iters},
        {"initial_residual_mean", ini.mean},
        {"initial_residual_std", ini.std},
        {"final_residual_mean", fin.mean},
        {"final_residual_std", fin.std},
    };
    result.summary_json = out_dir / "summary.json";
    write_file(result.summary_json, summary.dump(2) + "\n");
    return result;
}

CompareResult compare_variants(const ExperimentConfig &cfg) {
    cfg.validate();
    const std::vector<Variant> order = {
        Variant::proposed, Variant::track_adamz, Variant::track_adamx,
        Variant::consensus_adamx_adamz};

    CompareResult result;
    const std::filesystem::path out_dir(cfg.out_dir);
    for (Variant v : order) {
        ExperimentConfig sub = cfg;
        sub.optimizer.variant = v;
        sub.out_dir = (out_dir / variant_name(v)).string();
        ExperimentResult runs = run_experiment(sub);

        VariantResult vr;
        vr.variant = v;
        vr.label = variant_label(v);
        std::vector<double> finals;
        std::vector<double> initials;
        for (const auto &t : runs.trials) {
            initials.push_back(t.front().residual);
            finals.push_back(t.back().residual);
        }
        vr.mean_final_residual = mean_std(finals).mean;
        vr.mean_initial_residual = mean_std(initials).mean;
        vr.trials = std::move(runs.trials);
        result.variants.push_back(std::move(vr));
    }

    // Combined mean-residual table, one column per variant.
    size_t max_len = 0;
    for (const auto &vr : result.variants) {
        for (const auto &t : vr.trials) {
            max_len = std::max(max_len, t.size());
        }
    }
    std::ostringstream table;
    table << "iteration";
    for (const auto &vr : result.variants) {
        table << ',' << vr.label;
    }
    table << '\n';
    for (size_t k = 0; k < max_len; ++k) {
        table << k;
        for (const auto &vr : result.variants) {
            std::vector<double> res;
            for (const auto &t : vr.trials) {
                if (k < t.size()) {
                    res.push_back(t[k].residual);
                }
            }
            table << ',' << (res.empty() ? "" : fmt(mean_std(res).mean));
        }
        table << '\n';
    }
    std::filesystem::create_directories(out_dir);
    result.table_csv = out_dir / "variants.csv";
    write_file(result.table_csv, table.str());
    return result;
}

GradcheckResult run_gradcheck(const ExperimentConfig &cfg, int instances,
                              double step, double tolerance) {
    const Estimator est(EstimatorMode::exact());
    GradcheckResult result;
    result.instances = instances;

    for (int inst = 0; inst < instances; ++inst) {
        const std::uint64_t inst_seed = mix_seed(cfg.seed, 0x67adULL,
                                                 static_cast<std::uint64_t>(
                                                     inst));
        const ProblemInstance problem = random_problem(
            3, 2, GraphKind::path, GraphKind::path, SplitRule::uniform,
            inst_seed);
        const AnsatzConfig ansatz{problem.block_qubits, 2, true};
        const int p = ansatz.param_count();

        std::mt19937_64 rng(mix_seed(inst_seed, 0x9e11ULL));
        std::uniform_real_distribution<double> angle(-std::numbers::pi,
                                                     std::numbers::pi);
        std::uniform_real_distribution<double> scale(0.5, 1.5);
        const auto draw = [&] {
            AugmentedParams params;
            params.angles = Eigen::VectorXd::NullaryExpr(
                p, [&](Eigen::Index) { return angle(rng); });
            params.norm_scale = scale(rng);
            return params;
        };

        const int m = problem.grid_size;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                LocalCostInputs inputs;
                inputs.block = problem.blocks[static_cast<size_t>(i)]
                                             [static_cast<size_t>(j)];
                const auto &slice = problem.b_slices[static_cast<size_t>(i)]
                                                    [static_cast<size_t>(j)];
                inputs.b_state = slice.state;
                inputs.b_norm = slice.norm;
                inputs.ansatz = ansatz;
                inputs.self_index = j;
                inputs.own_x = draw();
                for (int k : problem.row_graph.neighbors(j)) {
                    inputs.neighbor_z[k] = draw();
                }

                const GradRecord grad = est.grad_cost(inputs);

                const auto check = [&](double analytic, double plus,
                                       double minus) {
                    const double fd = (plus - minus) / (2.0 * step);
                    const double err = std::abs(analytic - fd) /
                                       std::max(1.0, std::abs(fd));
                    result.max_rel_error =
                        std::max(result.max_rel_error, err);
                };

                for (int d = 0; d <= p; ++d) {
                    LocalCostInputs up = inputs;
                    LocalCostInputs down = inputs;
                    if (d < p) {
                        up.own_x.angles(d) += step;
                        down.own_x.angles(d) -= step;
                    } else {
                        up.own_x.norm_scale += step;
                        down.own_x.norm_scale -= step;
                    }
                    check(grad.d_alpha_tilde(d), est.local_cost(up),
                          est.local_cost(down));
                }
                for (const auto &[k, g_beta] : grad.d_beta_tilde) {
                    for (int d = 0; d <= p; ++d) {
                        LocalCostInputs up = inputs;
                        LocalCostInputs down = inputs;
                        if (d < p) {
                            up.neighbor_z[k].angles(d) += step;
                            down.neighbor_z[k].angles(d) -= step;
                        } else {
                            up.neighbor_z[k].norm_scale += step;
                            down.neighbor_z[k].norm_scale -= step;
                        }
                        check(g_beta(d), est.local_cost(up),
                              est.local_cost(down));
                    }
                }
            }
        }
    }
    result.passed = result.max_rel_error <= tolerance;
    return result;
}

Lemma1CheckResult run_lemma1(const ExperimentConfig &cfg, int draws,
                             double tolerance) {
    const ProblemInstance problem = build_problem(cfg);
    std::mt19937_64 rng(mix_seed(cfg.seed, 0x1e44aULL));
    std::normal_distribution<double> gauss(0.0, 1.0);

    Lemma1CheckResult result;
    result.draws = draws;
    const Eigen::Index dim = Eigen::Index{1} << problem.total_qubits;
    for (int d = 0; d < draws; ++d) {
        Eigen::VectorXd x = Eigen::VectorXd::NullaryExpr(
            dim, [&](Eigen::Index) { return gauss(rng); });
        x.normalize();
        const Lemma1Result check = lemma1_check(problem, x);
        const double dev = std::max(
            std::abs(check.min_over_z_projection - check.scaled_residual_sq),
            std::abs(check.min_over_z_direct - check.scaled_residual_sq));
        result.max_deviation = std::max(result.max_deviation, dev);
    }
    result.passed = result.max_deviation <= tolerance;
    return result;
}

} // namespace dvqls
