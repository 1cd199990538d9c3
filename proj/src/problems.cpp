#include "dvqls/problems.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace dvqls {

Statevector run_circuit(const Circuit &circuit, int num_qubits) {
    Statevector state(num_qubits);
    for (const auto &gate : circuit) {
        switch (gate.kind) {
        case GateOp::Kind::h:
            state.apply_h(gate.q1);
            break;
        case GateOp::Kind::cz:
            state.apply_cz(gate.q1, gate.q2);
            break;
        case GateOp::Kind::ry:
            state.apply_ry(gate.q1, gate.angle);
            break;
        case GateOp::Kind::x:
            state.apply_x(gate.q1);
            break;
        case GateOp::Kind::z:
            state.apply_z(gate.q1);
            break;
        }
    }
    return state;
}

std::pair<double, double> extreme_eigenvalues(const LcuOperator &op) {
    const Eigen::Index dim = Eigen::Index{1} << op.num_qubits();
    const Eigen::Index max_steps = std::min<Eigen::Index>(dim, 160);

    std::mt19937_64 rng(0x51c0ffeeULL);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXcd basis(dim, max_steps);
    Vector v(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        v(k) = normal(rng);
    }
    v.normalize();

    Eigen::VectorXd diag(max_steps);
    Eigen::VectorXd offdiag(max_steps);
    Eigen::Index steps = 0;
    Vector prev = Vector::Zero(dim);
    double beta = 0.0;
    for (Eigen::Index k = 0; k < max_steps; ++k) {
        basis.col(k) = v;
        Vector w = apply_lcu(op, Statevector(op.num_qubits(), v));
        const double alpha = v.dot(w).real();
        w -= alpha * v + beta * prev;
        // full reorthogonalization keeps the extreme Ritz values clean
        for (Eigen::Index j = 0; j <= k; ++j) {
            w -= basis.col(j).dot(w) * basis.col(j);
        }
        diag(k) = alpha;
        steps = k + 1;
        beta = w.norm();
        if (beta < 1e-12) {
            break;
        }
        offdiag(k) = beta;
        prev = v;
        v = w / beta;
    }

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(steps, steps);
    for (Eigen::Index k = 0; k < steps; ++k) {
        tri(k, k) = diag(k);
        if (k + 1 < steps) {
            tri(k, k + 1) = offdiag(k);
            tri(k + 1, k) = offdiag(k);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(tri);
    const auto &evals = solver.eigenvalues();
    return {evals(0), evals(steps - 1)};
}

namespace {

std::string identity_letters(int n) { return std::string(static_cast<size_t>(n), 'I'); }

// Shift lambda solving (mu_max + lambda)/(mu_min + lambda) = c in closed
// form; the resulting operator is positive definite for any c > 1.
double condition_shift(double mu_min, double mu_max, double target) {
    if (target <= 1.0) {
        throw std::invalid_argument("condition target must exceed 1");
    }
    if (mu_max - mu_min < 1e-12) {
        throw std::invalid_argument(
            "degenerate spectrum: condition target infeasible");
    }
    return (mu_max - target * mu_min) / (target - 1.0);
}

} // namespace

GeneratedSystem ising_system(int n, double kappa, double target_condition) {
    if (n < 1 || n > 13) {
        throw std::invalid_argument("ising_system: n outside [1, 13]");
    }
    std::vector<PauliTerm> base;
    for (int q = 0; q < n; ++q) {
        std::string letters = identity_letters(n);
        letters[static_cast<size_t>(q)] = 'X';
        base.push_back({1.0, letters});
    }
    for (int q = 0; q + 1 < n; ++q) {
        std::string letters = identity_letters(n);
        letters[static_cast<size_t>(q)] = 'Z';
        letters[static_cast<size_t>(q + 1)] = 'Z';
        base.push_back({kappa, letters});
    }
    const LcuOperator h0(n, base);
    const auto [mu_min, mu_max] = extreme_eigenvalues(h0);
    const double lambda = condition_shift(mu_min, mu_max, target_condition);
    const double zeta = mu_max + lambda;

    base.push_back({lambda, identity_letters(n)});
    GeneratedSystem out;
    out.op = LcuOperator(n, base).scaled(1.0 / zeta);
    for (int q = 0; q < n; ++q) {
        out.b_prep.push_back({GateOp::Kind::h, q});
    }
    out.achieved_condition = (mu_max + lambda) / (mu_min + lambda);
    return out;
}

int scaled_cluster_stabilizer_count(int n, int stabilizer_spacing) {
    if (n < 3) {
        throw std::invalid_argument("cluster system needs n >= 3");
    }
    if (stabilizer_spacing < 2) {
        throw std::invalid_argument("stabilizer spacing infeasible");
    }
    int count = 0;
    for (int center = 1; center + 1 <= n; center += stabilizer_spacing) {
        ++count;
    }
    return count;
}

GeneratedSystem scaled_cluster_system(int n, int stabilizer_spacing, double c1,
                                      double c2, double eps_perturb) {
    scaled_cluster_stabilizer_count(n, stabilizer_spacing); // validates
    std::vector<PauliTerm> terms;
    terms.push_back({c1, identity_letters(n)});
    for (int center = 1; center + 1 <= n; center += stabilizer_spacing) {
        std::string letters = identity_letters(n);
        // 1-based chain positions; the boundary stabilizer drops Z_0.
        if (center > 1) {
            letters[static_cast<size_t>(center - 2)] = 'Z';
        }
        letters[static_cast<size_t>(center - 1)] = 'X';
        letters[static_cast<size_t>(center)] = 'Z';
        terms.push_back({c2, letters});
    }
    if (eps_perturb != 0.0) {
        std::string letters = identity_letters(n);
        letters[static_cast<size_t>(n - 1)] = 'X';
        terms.push_back({eps_perturb, letters});
    }
    GeneratedSystem out;
    out.op = LcuOperator(n, terms);
    for (int q = 0; q < n; ++q) {
        out.b_prep.push_back({GateOp::Kind::h, q});
    }
    for (int q = 0; q + 1 < n; ++q) {
        out.b_prep.push_back({GateOp::Kind::cz, q, q + 1});
    }
    return out;
}

GeneratedSystem cluster_system(double c1, double c2, double eps_perturb) {
    return scaled_cluster_system(13, 3, c1, c2, eps_perturb);
}

ClusterCoeffs tune_cluster_coeffs(int n, int stabilizer_spacing,
                                  double eps_perturb,
                                  double target_condition) {
    // Tune c1 for M = S + eps * X_last with c2 = 1, then rescale everything
    // to unit spectral norm (leaves the condition number untouched).
    GeneratedSystem probe =
        scaled_cluster_system(n, stabilizer_spacing, 0.0, 1.0, eps_perturb);
    const auto [mu_min, mu_max] = extreme_eigenvalues(probe.op);
    const double c1 = condition_shift(mu_min, mu_max, target_condition);
    const double zeta = c1 + mu_max;
    return {c1 / zeta, 1.0 / zeta, eps_perturb / zeta};
}

ProblemInstance partition(const LcuOperator &global_op,
                          const Circuit &b_circuit, int block_qubits,
                          SplitRule split_rule, GraphKind row_kind,
                          GraphKind col_kind) {
    const int n = global_op.num_qubits();
    if (block_qubits < 1 || block_qubits > n) {
        throw std::invalid_argument("partition: invalid block qubit count");
    }
    ProblemInstance out;
    out.total_qubits = n;
    out.block_qubits = block_qubits;
    out.grid_size = 1 << (n - block_qubits);
    out.global_op = global_op;
    out.b_prep_circuit = b_circuit;
    out.b_dense = run_circuit(b_circuit, n).amplitudes().real();

    const int m = out.grid_size;
    const Eigen::Index block_dim = Eigen::Index{1} << block_qubits;
    out.blocks.resize(static_cast<size_t>(m));
    out.b_slices.resize(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        const Eigen::VectorXd b_i = out.b_dense.segment(i * block_dim, block_dim);
        for (int j = 0; j < m; ++j) {
            out.blocks[static_cast<size_t>(i)].push_back(
                m == 1 ? global_op : block_lcu(global_op, i, j, block_qubits));

            Eigen::VectorXd slice;
            switch (split_rule) {
            case SplitRule::uniform:
                slice = b_i / static_cast<double>(m);
                break;
            case SplitRule::diagonal:
                slice = (i == j) ? b_i : Eigen::VectorXd::Zero(block_dim);
                break;
            }
            BSlice bs{Statevector(block_qubits), slice.norm()};
            if (bs.norm > 0.0) {
                bs.state = Statevector(
                    block_qubits, (slice / bs.norm).cast<Complex>());
            }
            out.b_slices[static_cast<size_t>(i)].push_back(std::move(bs));
        }
    }

    out.row_graph = make_graph(row_kind, m);
    out.col_graph = make_graph(col_kind, m);
    if (!out.row_graph.connected() || !out.col_graph.connected()) {
        throw std::invalid_argument("partition: neighbor graphs must be connected");
    }
    return out;
}

} // namespace dvqls
