#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "dvqls/harness.hpp"
#include "dvqls/problems.hpp"

using namespace dvqls;

namespace {

std::pair<double, double> dense_extremes(const LcuOperator &op) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(op));
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

} // namespace

TEST_CASE("run_circuit composes gates") {
    Circuit c;
    c.push_back({GateOp::Kind::h, 0, 0, 0.0});
    c.push_back({GateOp::Kind::cz, 0, 1, 0.0});
    c.push_back({GateOp::Kind::x, 1, 0, 0.0});
    const Statevector s = run_circuit(c, 2);
    // H on qubit 0, CZ (no |11> weight yet), X on qubit 1: (|01> + |11>)/sqrt2.
    const double r = 1.0 / std::numbers::sqrt2;
    CHECK(std::abs(s.amplitudes()(1).real() - r) < 1e-12);
    CHECK(std::abs(s.amplitudes()(3).real() - r) < 1e-12);
}

TEST_CASE("lanczos extremes match dense eigenvalues") {
    for (int seed = 0; seed < 8; ++seed) {
        const ProblemInstance p = random_problem(
            4, 2, GraphKind::path, GraphKind::path, SplitRule::uniform,
            3000 + seed);
        // symmetrize: M = A + A^T as an LCU by doubling (Pauli sums of
        // I/X/Z letters are already symmetric)
        const auto [lo, hi] = extreme_eigenvalues(p.global_op);
        const auto [dlo, dhi] = dense_extremes(p.global_op);
        CHECK(lo == doctest::Approx(dlo).epsilon(1e-9));
        CHECK(hi == doctest::Approx(dhi).epsilon(1e-9));
    }
}

TEST_CASE("ising system hits the target condition number") {
    const GeneratedSystem sys = ising_system(3, 0.1, 10.0);
    const Eigen::MatrixXd a = to_dense(sys.op);
    CHECK((a - a.transpose()).norm() < 1e-12);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    CHECK(lo > 0.0);
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(hi / lo == doctest::Approx(10.0).epsilon(1e-6));
    CHECK(sys.achieved_condition == doctest::Approx(10.0).epsilon(1e-6));

    // b is the uniform superposition
    const Statevector b = run_circuit(sys.b_prep, 3);
    CHECK((b.amplitudes().real() -
           Eigen::VectorXd::Constant(8, 1.0 / std::sqrt(8.0)))
              .norm() < 1e-12);
}

TEST_CASE("scaled cluster stabilizer layout") {
    // n=5, spacing 3: centers at sites 1 and 4 (1-based).
    CHECK(scaled_cluster_stabilizer_count(5, 3) == 2);
    CHECK(scaled_cluster_stabilizer_count(13, 3) == 4);

    const GeneratedSystem sys = scaled_cluster_system(5, 3, 1.0, 0.2, 0.0);
    // c1*I + c2*(X1 Z2 + Z3 X4 Z5) as letters (qubit order left to right)
    bool found_boundary = false;
    bool found_inner = false;
    for (const auto &t : sys.op.terms()) {
        if (t.letters == "XZIII") {
            found_boundary = true;
            CHECK(t.coefficient == doctest::Approx(0.2));
        }
        if (t.letters == "IIZXZ") {
            found_inner = true;
            CHECK(t.coefficient == doctest::Approx(0.2));
        }
    }
    CHECK(found_boundary);
    CHECK(found_inner);
}

TEST_CASE("unperturbed cluster system is solved by a rescaled b") {
    const GeneratedSystem sys = scaled_cluster_system(5, 3, 1.0, 0.2, 0.0);
    const Eigen::MatrixXd a = to_dense(sys.op);
    const Eigen::VectorXd b = run_circuit(sys.b_prep, 5).amplitudes().real();
    const int k = scaled_cluster_stabilizer_count(5, 3);
    const Eigen::VectorXd x = b / (1.0 + k * 0.2);
    CHECK((a * x - b).norm() < 1e-10);
}

TEST_CASE("perturbation breaks the eigenvector relation") {
    const GeneratedSystem sys = scaled_cluster_system(5, 3, 1.0, 0.2, 0.1);
    const Eigen::MatrixXd a = to_dense(sys.op);
    const Eigen::VectorXd b = run_circuit(sys.b_prep, 5).amplitudes().real();
    const Eigen::VectorXd x = b / (1.0 + 2 * 0.2);
    CHECK((a * x - b).norm() > 1e-3);
}

TEST_CASE("cluster coefficient tuner") {
    const ClusterCoeffs c = tune_cluster_coeffs(5, 3, 0.1, 20.0);
    const GeneratedSystem sys =
        scaled_cluster_system(5, 3, c.c1, c.c2, c.eps);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(sys.op));
    const double lo = es.eigenvalues().cwiseAbs().minCoeff();
    const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(hi / lo == doctest::Approx(20.0).epsilon(1e-6));
}

TEST_CASE("partition tiles operator and b consistently") {
    for (SplitRule rule : {SplitRule::uniform, SplitRule::diagonal}) {
        const GeneratedSystem sys = ising_system(3, 0.1, 5.0);
        const ProblemInstance p = partition(sys.op, sys.b_prep, 2, rule,
                                            GraphKind::path, GraphKind::path);
        CHECK(p.grid_size == 2);
        CHECK(p.block_qubits == 2);

        const Eigen::MatrixXd dense = to_dense(p.global_op);
        // block reassembly
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const Eigen::MatrixXd blk = to_dense(p.blocks[i][j]);
                CHECK((blk - dense.block(4 * i, 4 * j, 4, 4)).norm() < 1e-12);
            }
        }
        // slices of each row sum back to b_i
        for (int i = 0; i < 2; ++i) {
            Eigen::VectorXd sum = Eigen::VectorXd::Zero(4);
            for (int j = 0; j < 2; ++j) {
                const auto &s = p.b_slices[i][j];
                CHECK(std::abs(s.state.norm() - 1.0) < 1e-12);
                sum += s.norm * s.state.amplitudes().real();
            }
            CHECK((sum - p.b_dense.segment(4 * i, 4)).norm() < 1e-12);
        }
        if (rule == SplitRule::diagonal) {
            CHECK(p.b_slices[0][1].norm == 0.0);
            CHECK(p.b_slices[1][0].norm == 0.0);
        } else {
            // uniform: all slices of a row are b_i / m
            CHECK(p.b_slices[0][0].norm ==
                  doctest::Approx(p.b_slices[0][1].norm));
        }
    }
}

TEST_CASE("1x1 partition keeps the global system") {
    const GeneratedSystem sys = ising_system(3, 0.1, 5.0);
    const ProblemInstance p = partition(sys.op, sys.b_prep, 3,
                                        SplitRule::uniform, GraphKind::path,
                                        GraphKind::path);
    CHECK(p.grid_size == 1);
    CHECK((to_dense(p.blocks[0][0]) - to_dense(sys.op)).norm() < 1e-12);
    CHECK(p.b_slices[0][0].norm == doctest::Approx(1.0));
}

TEST_CASE("partition validates arguments") {
    const GeneratedSystem sys = ising_system(3, 0.1, 5.0);
    CHECK_THROWS_AS(partition(sys.op, sys.b_prep, 0, SplitRule::uniform,
                              GraphKind::path, GraphKind::path),
                    std::invalid_argument);
    CHECK_THROWS_AS(partition(sys.op, sys.b_prep, 4, SplitRule::uniform,
                              GraphKind::path, GraphKind::path),
                    std::invalid_argument);
}
