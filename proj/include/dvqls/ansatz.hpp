// Hardware-efficient ansatz: optional Hadamard layer, then alternating
// layers of per-qubit Ry rotations and CZ gates on an open line.

#pragma once

#include <Eigen/Dense>

#include "dvqls/statevector.hpp"

namespace dvqls {

struct AnsatzConfig {
    int num_qubits = 1;
    int num_layers = 1;
    bool initial_hadamard = false;

    int param_count() const { return num_qubits * num_layers; }
};

// Circuit parameters plus the positive norm scale (rho or sigma).
struct AugmentedParams {
    Eigen::VectorXd angles;
    double norm_scale = 1.0;

    Eigen::Index dim() const { return angles.size() + 1; }
};

Statevector prepare_state(const AnsatzConfig &config,
                          const Eigen::VectorXd &angles);

// Same circuit with angles[index] shifted by sign * pi/2.
Statevector prepare_shifted(const AnsatzConfig &config,
                            const Eigen::VectorXd &angles, Eigen::Index index,
                            int sign);

} // namespace dvqls
