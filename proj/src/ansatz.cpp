#include "dvqls/ansatz.hpp"

#include <numbers>
#include <stdexcept>

namespace dvqls {

Statevector prepare_state(const AnsatzConfig &config,
                          const Eigen::VectorXd &angles) {
    if (angles.size() != config.param_count()) {
        throw std::invalid_argument("prepare_state: parameter-count mismatch");
    }
    Statevector state(config.num_qubits);
    if (config.initial_hadamard) {
        for (int q = 0; q < config.num_qubits; ++q) {
            state.apply_h(q);
        }
    }
    Eigen::Index p = 0;
    for (int layer = 0; layer < config.num_layers; ++layer) {
        for (int q = 0; q < config.num_qubits; ++q) {
            state.apply_ry(q, angles(p++));
        }
        for (int q = 0; q + 1 < config.num_qubits; ++q) {
            state.apply_cz(q, q + 1);
        }
    }
    return state;
}

Statevector prepare_shifted(const AnsatzConfig &config,
                            const Eigen::VectorXd &angles, Eigen::Index index,
                            int sign) {
    if (index < 0 || index >= angles.size()) {
        throw std::out_of_range("prepare_shifted: index out of range");
    }
    Eigen::VectorXd shifted = angles;
    shifted(index) += sign * std::numbers::pi / 2.0;
    return prepare_state(config, shifted);
}

} // namespace dvqls
