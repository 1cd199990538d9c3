// Benchmark linear systems: the transverse-field Ising construction, the
// perturbed cluster-state stabilizer system (and its desk-scale analogs),
// condition-number tuning, and block partitioning into agent problems.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dvqls/graph.hpp"
#include "dvqls/pauli.hpp"
#include "dvqls/statevector.hpp"

namespace dvqls {

struct GateOp {
    enum class Kind { h, cz, ry, x, z };
    Kind kind;
    int q1 = 0;
    int q2 = 0;
    double angle = 0.0;
};
using Circuit = std::vector<GateOp>;

Statevector run_circuit(const Circuit &circuit, int num_qubits);

struct GeneratedSystem {
    LcuOperator op;
    Circuit b_prep;
    double achieved_condition = 0.0;
};

// Extreme eigenvalues of a real-symmetric LCU operator via Lanczos with
// full reorthogonalization on the matrix-free action.
std::pair<double, double> extreme_eigenvalues(const LcuOperator &op);

// A = (1/zeta)(sum_i X_i + kappa sum_i Z_i Z_{i+1} + lambda I) with lambda
// chosen so cond(A) = target_condition and zeta normalizing the largest
// eigenvalue to 1; b = H^tensor |0...0>.
GeneratedSystem ising_system(int n, double kappa, double target_condition);

// Fixed 13-qubit perturbed cluster-stabilizer system.
GeneratedSystem cluster_system(double c1, double c2, double eps_perturb);

// Desk-scale analog: Z-X-Z stabilizers centered at 1, 1+spacing, ... along
// the chain (boundary form X_1 Z_2), perturbation X on the last qubit.
GeneratedSystem scaled_cluster_system(int n, int stabilizer_spacing, double c1,
                                      double c2, double eps_perturb);
int scaled_cluster_stabilizer_count(int n, int stabilizer_spacing);

// Coefficients (c1, c2, eps) for the scaled cluster system such that
// cond(A) matches target_condition with the perturbation fixed at
// eps_perturb before the final unit-spectral-norm rescale.
struct ClusterCoeffs {
    double c1;
    double c2;
    double eps;
};
ClusterCoeffs tune_cluster_coeffs(int n, int stabilizer_spacing,
                                  double eps_perturb, double target_condition);

enum class SplitRule { uniform, diagonal };

struct BSlice {
    Statevector state; // |b_ij>, normalized (|0...0> when the norm is 0)
    double norm = 0.0; // ||b_ij||
};

struct ProblemInstance {
    int total_qubits = 0;
    int block_qubits = 0;
    int grid_size = 1; // m = 2^(n - q)
    LcuOperator global_op;
    Circuit b_prep_circuit;
    Eigen::VectorXd b_dense;
    std::vector<std::vector<LcuOperator>> blocks; // [row][col]
    std::vector<std::vector<BSlice>> b_slices;    // [row][col]
    NeighborGraph row_graph{1, {}};
    NeighborGraph col_graph{1, {}};
};

ProblemInstance partition(const LcuOperator &global_op,
                          const Circuit &b_circuit, int block_qubits,
                          SplitRule split_rule, GraphKind row_kind,
                          GraphKind col_kind);

} // namespace dvqls
