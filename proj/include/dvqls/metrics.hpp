// Global residual and consensus metrics, the classical least-squares
// oracle, and the row-block projection identity check.

#pragma once

#include <Eigen/Dense>
#include <utility>

#include "dvqls/optimizer.hpp"
#include "dvqls/problems.hpp"
#include "dvqls/run_record.hpp"

namespace dvqls {

// Stacked per-row estimates x_i = [rho_i1 |x_i1>; ...; rho_im |x_im>].
std::vector<Eigen::VectorXd> row_estimates(const Network &network);

// Block-row average x(t) of the per-row estimates.
Eigen::VectorXd global_estimate(const Network &network);

// ||A x(t) - b||, computed densely and block-wise; the two paths are
// checked against each other.
double global_residual(const Network &network);

// sqrt(1/m sum_i ||x_i - x||^2).
double consensus_error(const Network &network);

// Per-column standard deviation of alpha_tilde across rows, RMS-aggregated
// over columns.
double param_consensus_error(const Network &network);

// Minimum-norm least-squares solution of the dense system.
Eigen::VectorXd classical_lsq(const ProblemInstance &problem);

// Row-block projection identity: returns (min over z of
// sum_i ||Abar_i x - bbar_i - Lbar z_i||^2, (1/m) ||Ax - b||^2), the left
// value evaluated both by the kernel projection and by a direct solve.
struct Lemma1Result {
    double min_over_z_projection;
    double min_over_z_direct;
    double scaled_residual_sq;
};
Lemma1Result lemma1_check(const ProblemInstance &problem,
                          const Eigen::VectorXd &x);

} // namespace dvqls
