#include "dvqls/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <stdexcept>

#include "dvqls/metrics.hpp"

namespace dvqls {

namespace {

constexpr double kScaleFloor = 1e-6;

} // namespace

Variant parse_variant(const std::string &name) {
    if (name == "proposed") {
        return Variant::proposed;
    }
    if (name == "track_adamz") {
        return Variant::track_adamz;
    }
    if (name == "track_adamx") {
        return Variant::track_adamx;
    }
    if (name == "consensus_adamx_adamz") {
        return Variant::consensus_adamx_adamz;
    }
    throw std::invalid_argument("unknown variant '" + name + "'");
}

std::string variant_label(Variant v) {
    switch (v) {
    case Variant::proposed:
        return "Track+AdamX+AdamZ";
    case Variant::track_adamz:
        return "Track+AdamZ";
    case Variant::track_adamx:
        return "Track+AdamX";
    case Variant::consensus_adamx_adamz:
        return "Consensus+AdamX+AdamZ";
    }
    return "?";
}

void OptimizerConfig::validate() const {
    if (gamma1 < 0.0 || gamma1 >= 1.0 || gamma2 < 0.0 || gamma2 >= 1.0) {
        throw std::invalid_argument("optimizer: gamma decay rates must lie in [0,1)");
    }
    if (eta <= 0.0 || epsilon <= 0.0) {
        throw std::invalid_argument("optimizer: eta and epsilon must be positive");
    }
    if (eps_stop < 0.0 || max_iters < 1) {
        throw std::invalid_argument("optimizer: invalid stopping parameters");
    }
}

Network::Network(std::shared_ptr<const ProblemInstance> problem,
                 AnsatzConfig ansatz, OptimizerConfig config,
                 EstimatorMode mode, std::uint64_t seed)
    : problem_(std::move(problem)), ansatz_(ansatz), config_(config),
      mode_(mode), seed_(seed) {
    config_.validate();
    if (ansatz_.num_qubits != problem_->block_qubits) {
        throw std::invalid_argument("Network: ansatz width must match blocks");
    }
    col_weights_ = metropolis_weights(problem_->col_graph);
    const int m = problem_->grid_size;
    agents_.resize(static_cast<size_t>(m) * static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            auto &a = agent(i, j);
            a.row = i;
            a.col = j;
        }
    }
}

const AgentState &Network::agent(int row, int col) const {
    return agents_[static_cast<size_t>(row) *
                       static_cast<size_t>(problem_->grid_size) +
                   static_cast<size_t>(col)];
}

AgentState &Network::agent(int row, int col) {
    return agents_[static_cast<size_t>(row) *
                       static_cast<size_t>(problem_->grid_size) +
                   static_cast<size_t>(col)];
}

void Network::initialize(double angle_min, double angle_max) {
    const int m = problem_->grid_size;
    const Eigen::Index p = ansatz_.param_count();
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            auto &a = agent(i, j);
            std::mt19937_64 rng(mix_seed(seed_, 0x1717, i, j));
            std::uniform_real_distribution<double> draw(angle_min, angle_max);
            a.alpha_tilde = Eigen::VectorXd::Zero(p + 1);
            a.beta_tilde = Eigen::VectorXd::Zero(p + 1);
            for (Eigen::Index h = 0; h < p; ++h) {
                a.alpha_tilde(h) = draw(rng);
            }
            for (Eigen::Index h = 0; h < p; ++h) {
                a.beta_tilde(h) = draw(rng);
            }
            a.alpha_tilde(p) = 1.0; // rho
            a.beta_tilde(p) = 1.0;  // sigma
            a.mu = Eigen::VectorXd::Zero(p + 1);
            a.nu = Eigen::VectorXd::Zero(p + 1);
            a.mu_p = Eigen::VectorXd::Zero(p + 1);
            a.nu_p = Eigen::VectorXd::Zero(p + 1);
        }
    }
    // beta(0) is now visible to row-neighbors; evaluate y(0) and the dummy
    // previous gradient.
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            auto &a = agent(i, j);
            a.y = eval_grads(i, j).d_alpha_tilde;
            a.prev_alpha_grad = a.y;
        }
    }
    iter_ = 0;
}

LocalCostInputs Network::cost_inputs(int row, int col) const {
    const Eigen::Index p = ansatz_.param_count();
    LocalCostInputs in;
    in.block = problem_->blocks[static_cast<size_t>(row)][static_cast<size_t>(col)];
    const auto &slice =
        problem_->b_slices[static_cast<size_t>(row)][static_cast<size_t>(col)];
    in.b_state = slice.state;
    in.b_norm = slice.norm;
    in.ansatz = ansatz_;
    in.self_index = col;
    const auto &a = agent(row, col);
    in.own_x = {a.alpha_tilde.head(p), a.alpha_tilde(p)};
    for (int k : problem_->row_graph.neighbors(col)) {
        const auto &nb = agent(row, k);
        in.neighbor_z[k] = {nb.beta_tilde.head(p), nb.beta_tilde(p)};
    }
    return in;
}

GradRecord Network::eval_grads(int row, int col) const {
    const Estimator est(mode_);
    const std::uint64_t stream = mix_seed(seed_, static_cast<std::uint64_t>(iter_),
                                          row, col);
    return est.grad_cost(cost_inputs(row, col), stream);
}

double Network::stepsize(long t_plus_1) const {
    const double t = static_cast<double>(t_plus_1);
    return config_.eta * std::sqrt(1.0 - std::pow(config_.gamma2, t)) /
           (1.0 - std::pow(config_.gamma1, t));
}

void Network::floor_scales() {
    const Eigen::Index p = ansatz_.param_count();
    static bool warned = false;
    for (auto &a : agents_) {
        for (double *scale : {&a.alpha_tilde(p), &a.beta_tilde(p)}) {
            if (*scale < kScaleFloor) {
                *scale = kScaleFloor;
                if (!warned) {
                    std::cerr << "warning: norm scale floored at " << kScaleFloor
                              << "\n";
                    warned = true;
                }
            }
        }
    }
}

void Network::step() {
    const int m = problem_->grid_size;
    const long t = iter_;
    const double eta_t = stepsize(t + 1);
    const bool adam_x = config_.variant != Variant::track_adamz;
    const bool adam_z = config_.variant != Variant::track_adamx;
    const bool tracking = config_.variant != Variant::consensus_adamx_adamz;

    // 1st transmission: alpha_tilde and y go to column-neighbors,
    // beta_tilde to row-neighbors. The snapshot plays the role of the
    // synchronized message buffers.
    std::vector<AgentState> snapshot = agents_;
    auto sent = [&](int i, int j) -> const AgentState & {
        return snapshot[static_cast<size_t>(i) * static_cast<size_t>(m) +
                        static_cast<size_t>(j)];
    };

    // 1st update, plus the gradient evaluations both updates need.
    std::vector<GradRecord> grads(agents_.size());
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const size_t idx = static_cast<size_t>(i) * static_cast<size_t>(m) +
                               static_cast<size_t>(j);
            grads[idx] = eval_grads(i, j);
            auto &a = agent(i, j);
            const auto &grad_now = grads[idx].d_alpha_tilde;

            Eigen::VectorXd mix = Eigen::VectorXd::Zero(a.alpha_tilde.size());
            Eigen::VectorXd y_mix = Eigen::VectorXd::Zero(a.alpha_tilde.size());
            for (int k : problem_->col_graph.neighbors(i)) {
                mix += col_weights_(i, k) * sent(k, j).alpha_tilde;
                y_mix += col_weights_(i, k) * sent(k, j).y;
            }

            const Eigen::VectorXd &driver = tracking ? sent(i, j).y : grad_now;
            if (adam_x) {
                a.mu = config_.gamma1 * a.mu + (1.0 - config_.gamma1) * driver;
                a.nu = config_.gamma2 * a.nu +
                       (1.0 - config_.gamma2) * driver.cwiseProduct(driver);
                a.alpha_tilde =
                    mix - eta_t * (a.mu.array() /
                                   (a.nu.array().sqrt() + config_.epsilon))
                              .matrix();
            } else {
                a.alpha_tilde = mix - config_.eta * sent(i, j).y;
            }

            if (tracking) {
                a.y = y_mix + grad_now - a.prev_alpha_grad;
            }
            a.prev_alpha_grad = grad_now;
        }
    }

    // 2nd transmission: the cross gradient with respect to beta_tilde_ik
    // is delivered to row-neighbor k; g_ij sums what agent (i,j) receives.
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            auto &a = agent(i, j);
            Eigen::VectorXd g = Eigen::VectorXd::Zero(a.beta_tilde.size());
            for (int k : problem_->row_graph.neighbors(j)) {
                const size_t sender =
                    static_cast<size_t>(i) * static_cast<size_t>(m) +
                    static_cast<size_t>(config_.literal_g ? j : k);
                const int target = config_.literal_g ? k : j;
                g += grads[sender].d_beta_tilde.at(target);
            }

            // 2nd update.
            if (adam_z) {
                a.mu_p = config_.gamma1 * a.mu_p + (1.0 - config_.gamma1) * g;
                a.nu_p = config_.gamma2 * a.nu_p +
                         (1.0 - config_.gamma2) * g.cwiseProduct(g);
                a.beta_tilde -=
                    eta_t * (a.mu_p.array() /
                             (a.nu_p.array().sqrt() + config_.epsilon))
                                .matrix();
            } else {
                a.beta_tilde -= config_.eta * g;
            }
        }
    }

    floor_scales();
    ++iter_;
}

std::vector<RunRecord> run(std::shared_ptr<const ProblemInstance> problem,
                           const AnsatzConfig &ansatz,
                           const OptimizerConfig &config,
                           const EstimatorMode &mode, double angle_min,
                           double angle_max, std::uint64_t seed,
                           bool record_wall_time) {
    Network network(std::move(problem), ansatz, config, mode, seed);
    network.initialize(angle_min, angle_max);

    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&]() {
        if (!record_wall_time) {
            return 0.0;
        }
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start)
            .count();
    };
    auto record = [&](long t) {
        RunRecord r;
        r.iteration = t;
        r.residual = global_residual(network);
        r.consensus_error = consensus_error(network);
        r.param_consensus_error = param_consensus_error(network);
        r.wall_time_s = elapsed();
        r.seed = seed;
        return r;
    };

    std::vector<RunRecord> records;
    records.push_back(record(0));
    for (long t = 0; t < config.max_iters; ++t) {
        network.step();
        records.push_back(record(t + 1));
        if (records.back().residual <= config.eps_stop) {
            break;
        }
    }
    return records;
}

} // namespace dvqls
