#include "dvqls/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

#include "dvqls/ansatz.hpp"
#include "dvqls/graph.hpp"

namespace dvqls {

std::vector<Eigen::VectorXd> row_estimates(const Network &network) {
    const auto &problem = network.problem();
    if (problem.total_qubits > 13) {
        throw std::invalid_argument("row_estimates: size cap exceeded");
    }
    const int m = problem.grid_size;
    const Eigen::Index block_dim = Eigen::Index{1} << problem.block_qubits;
    const Eigen::Index p = network.ansatz().param_count();

    std::vector<Eigen::VectorXd> rows;
    rows.reserve(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        Eigen::VectorXd x_i(m * block_dim);
        for (int j = 0; j < m; ++j) {
            const auto &a = network.agent(i, j);
            const Statevector state =
                prepare_state(network.ansatz(), a.alpha_tilde.head(p));
            x_i.segment(j * block_dim, block_dim) =
                a.alpha_tilde(p) * state.amplitudes().real();
        }
        rows.push_back(std::move(x_i));
    }
    return rows;
}

Eigen::VectorXd global_estimate(const Network &network) {
    const auto rows = row_estimates(network);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(rows.front().size());
    for (const auto &x_i : rows) {
        mean += x_i;
    }
    return mean / static_cast<double>(rows.size());
}

double global_residual(const Network &network) {
    const auto &problem = network.problem();
    const Eigen::VectorXd x = global_estimate(network);

    // Dense path.
    const Statevector xs(problem.total_qubits, x.cast<Complex>());
    const Eigen::VectorXd ax = apply_lcu(problem.global_op, xs).real();
    const double dense = (ax - problem.b_dense).norm();

    // Block-wise path: r_i = sum_j A_ij xbar_j - b_i.
    const int m = problem.grid_size;
    const Eigen::Index block_dim = Eigen::Index{1} << problem.block_qubits;
    double sum_sq = 0.0;
    for (int i = 0; i < m; ++i) {
        Eigen::VectorXd r_i = -problem.b_dense.segment(i * block_dim, block_dim);
        for (int j = 0; j < m; ++j) {
            const Statevector xj(problem.block_qubits,
                                 x.segment(j * block_dim, block_dim)
                                     .cast<Complex>());
            r_i += apply_lcu(problem.blocks[static_cast<size_t>(i)]
                                           [static_cast<size_t>(j)],
                             xj)
                       .real();
        }
        sum_sq += r_i.squaredNorm();
    }
    const double blockwise = std::sqrt(sum_sq);
    if (std::abs(dense - blockwise) > 1e-8 * std::max(1.0, dense)) {
        throw std::runtime_error("global_residual: dense/block-wise mismatch");
    }
    return dense;
}

double consensus_error(const Network &network) {
    const auto rows = row_estimates(network);
    const auto m = static_cast<double>(rows.size());
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(rows.front().size());
    for (const auto &x_i : rows) {
        mean += x_i;
    }
    mean /= m;
    double sum_sq = 0.0;
    for (const auto &x_i : rows) {
        sum_sq += (x_i - mean).squaredNorm();
    }
    return std::sqrt(sum_sq / m);
}

double param_consensus_error(const Network &network) {
    const int m = network.grid_size();
    double col_ms = 0.0;
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXd mean =
            Eigen::VectorXd::Zero(network.agent(0, j).alpha_tilde.size());
        for (int i = 0; i < m; ++i) {
            mean += network.agent(i, j).alpha_tilde;
        }
        mean /= static_cast<double>(m);
        double sum_sq = 0.0;
        for (int i = 0; i < m; ++i) {
            sum_sq += (network.agent(i, j).alpha_tilde - mean).squaredNorm();
        }
        col_ms += sum_sq / static_cast<double>(m);
    }
    return std::sqrt(col_ms / static_cast<double>(m));
}

Eigen::VectorXd classical_lsq(const ProblemInstance &problem) {
    if (problem.total_qubits > 13) {
        throw std::invalid_argument("classical_lsq: size cap exceeded");
    }
    const Eigen::MatrixXd a = to_dense(problem.global_op);
    // Complete orthogonal decomposition gives the minimum-norm solution for
    // rank-deficient systems.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    return cod.solve(problem.b_dense);
}

Lemma1Result lemma1_check(const ProblemInstance &problem,
                          const Eigen::VectorXd &x) {
    if (problem.total_qubits > 10) {
        throw std::invalid_argument("lemma1_check: size cap exceeded");
    }
    const int m = problem.grid_size;
    const Eigen::Index block_dim = Eigen::Index{1} << problem.block_qubits;
    const Eigen::Index stacked = m * block_dim;

    const Eigen::MatrixXd lap = laplacian(problem.row_graph);
    const Eigen::MatrixXd lbar = Eigen::kroneckerProduct(
        lap, Eigen::MatrixXd::Identity(block_dim, block_dim));
    // Projector onto ker(Lbar^T) = span{1 (x) v}.
    const Eigen::MatrixXd proj = Eigen::kroneckerProduct(
        Eigen::MatrixXd::Ones(m, m) / static_cast<double>(m),
        Eigen::MatrixXd::Identity(block_dim, block_dim));

    double via_projection = 0.0;
    double via_solve = 0.0;
    double rhs = 0.0;
    const Eigen::MatrixXd dense_a = to_dense(problem.global_op);
    for (int i = 0; i < m; ++i) {
        // r_i = Abar_i x - bbar_i with Abar_i = diag(A_i1, ..., A_im).
        Eigen::VectorXd r_i(stacked);
        for (int j = 0; j < m; ++j) {
            const Statevector xj(problem.block_qubits,
                                 x.segment(j * block_dim, block_dim)
                                     .cast<Complex>());
            const Eigen::VectorXd a_x =
                apply_lcu(problem.blocks[static_cast<size_t>(i)]
                                        [static_cast<size_t>(j)],
                          xj)
                    .real();
            Eigen::VectorXd b_ij(block_dim);
            const auto &slice =
                problem.b_slices[static_cast<size_t>(i)][static_cast<size_t>(j)];
            b_ij = slice.norm * slice.state.amplitudes().real();
            r_i.segment(j * block_dim, block_dim) = a_x - b_ij;
        }
        via_projection += (proj * r_i).squaredNorm();

        const Eigen::VectorXd z_star =
            lbar.completeOrthogonalDecomposition().solve(r_i);
        via_solve += (r_i - lbar * z_star).squaredNorm();

        const Eigen::VectorXd row_res =
            dense_a.middleRows(i * block_dim, block_dim) * x -
            problem.b_dense.segment(i * block_dim, block_dim);
        rhs += row_res.squaredNorm() / static_cast<double>(m);
    }
    return {via_projection, via_solve, rhs};
}

} // namespace dvqls
