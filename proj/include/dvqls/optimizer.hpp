// The distributed optimization loop: per-agent state, the two synchronized
// transmission rounds, the Adam + delayed-gradient-tracking update for the
// alpha parameters, the collective Adam update for the beta parameters,
// and the three ablation variants.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dvqls/estimator.hpp"
#include "dvqls/problems.hpp"
#include "dvqls/run_record.hpp"

namespace dvqls {

enum class Variant { proposed, track_adamz, track_adamx, consensus_adamx_adamz };

Variant parse_variant(const std::string &name);
std::string variant_label(Variant v);

struct OptimizerConfig {
    double gamma1 = 0.9;
    double gamma2 = 0.999;
    double eta = 0.01;
    double epsilon = 1e-8;
    double eps_stop = 0.0;
    long max_iters = 1000;
    Variant variant = Variant::proposed;
    // g_ij assembly: false sums the gradients received from row-neighbors
    // (each taken with respect to this agent's own beta), true uses the
    // literal sum of this agent's own cross gradients.
    bool literal_g = false;

    void validate() const;
};

struct AgentState {
    int row = 0;
    int col = 0;
    Eigen::VectorXd alpha_tilde; // [alpha; rho]
    Eigen::VectorXd beta_tilde;  // [beta; sigma]
    Eigen::VectorXd mu, nu;      // Adam moments for alpha_tilde
    Eigen::VectorXd mu_p, nu_p;  // Adam moments for beta_tilde
    Eigen::VectorXd y;           // gradient tracker
    Eigen::VectorXd prev_alpha_grad;
};

class Network {
  public:
    Network(std::shared_ptr<const ProblemInstance> problem,
            AnsatzConfig ansatz, OptimizerConfig config, EstimatorMode mode,
            std::uint64_t seed);

    const ProblemInstance &problem() const { return *problem_; }
    const AnsatzConfig &ansatz() const { return ansatz_; }
    const OptimizerConfig &config() const { return config_; }
    std::uint64_t seed() const { return seed_; }
    long iteration() const { return iter_; }

    int grid_size() const { return problem_->grid_size; }
    const AgentState &agent(int row, int col) const;
    AgentState &agent(int row, int col);
    const std::vector<AgentState> &agents() const { return agents_; }

    // Zero moments, draw angles uniformly from
    // [angle_min, angle_max], rho = sigma = 1, exchange beta, evaluate
    // y(0) = grad C(0) and set the dummy previous gradient equal to it.
    void initialize(double angle_min, double angle_max);

    // One full iteration: both transmissions and both updates.
    void step();

  private:
    std::shared_ptr<const ProblemInstance> problem_;
    AnsatzConfig ansatz_;
    OptimizerConfig config_;
    EstimatorMode mode_;
    Eigen::MatrixXd col_weights_; // Metropolis weights of the column graph
    std::uint64_t seed_;
    long iter_ = 0;
    std::vector<AgentState> agents_;

    LocalCostInputs cost_inputs(int row, int col) const;
    GradRecord eval_grads(int row, int col) const;
    double stepsize(long t_plus_1) const;
    void floor_scales();
};

// Iterates until ||Ax - b|| <= eps_stop or the iteration budget is spent;
// metrics are recorded every iteration (index 0 is the initial point).
std::vector<RunRecord> run(std::shared_ptr<const ProblemInstance> problem,
                           const AnsatzConfig &ansatz,
                           const OptimizerConfig &config,
                           const EstimatorMode &mode, double angle_min,
                           double angle_max, std::uint64_t seed,
                           bool record_wall_time = false);

} // namespace dvqls
