#include "dvqls/statevector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dvqls {

namespace {

// Index stride of `qubit` within the amplitude array. Qubit 0 is the most
// significant bit, so its stride is 2^(n-1).
inline Eigen::Index stride_of(int num_qubits, int qubit) {
    return Eigen::Index{1} << (num_qubits - 1 - qubit);
}

} // namespace

Statevector::Statevector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("Statevector: qubit count " +
                                    std::to_string(num_qubits) +
                                    " outside [1, " +
                                    std::to_string(kMaxQubits) + "]");
    }
    amps_ = Vector::Zero(Eigen::Index{1} << num_qubits);
    amps_(0) = 1.0;
}

Statevector::Statevector(int num_qubits, Vector amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("Statevector: qubit count out of range");
    }
    if (amps_.size() != (Eigen::Index{1} << num_qubits)) {
        throw std::invalid_argument(
            "Statevector: amplitude length does not match qubit count");
    }
}

void Statevector::check_qubit(int qubit) const {
    if (qubit < 0 || qubit >= num_qubits_) {
        throw std::out_of_range("Statevector: qubit index " +
                                std::to_string(qubit) + " out of range");
    }
}

void Statevector::apply_ry(int qubit, double angle) {
    check_qubit(qubit);
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    const Eigen::Index stride = stride_of(num_qubits_, qubit);
    for (Eigen::Index base = 0; base < amps_.size(); base += 2 * stride) {
        for (Eigen::Index k = base; k < base + stride; ++k) {
            const Complex a0 = amps_(k);
            const Complex a1 = amps_(k + stride);
            amps_(k) = c * a0 - s * a1;
            amps_(k + stride) = s * a0 + c * a1;
        }
    }
}

void Statevector::apply_h(int qubit) {
    check_qubit(qubit);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Eigen::Index stride = stride_of(num_qubits_, qubit);
    for (Eigen::Index base = 0; base < amps_.size(); base += 2 * stride) {
        for (Eigen::Index k = base; k < base + stride; ++k) {
            const Complex a0 = amps_(k);
            const Complex a1 = amps_(k + stride);
            amps_(k) = inv_sqrt2 * (a0 + a1);
            amps_(k + stride) = inv_sqrt2 * (a0 - a1);
        }
    }
}

void Statevector::apply_cz(int control, int target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw std::invalid_argument("apply_cz: control equals target");
    }
    const Eigen::Index mask = stride_of(num_qubits_, control) |
                              stride_of(num_qubits_, target);
    for (Eigen::Index k = 0; k < amps_.size(); ++k) {
        if ((k & mask) == mask) {
            amps_(k) = -amps_(k);
        }
    }
}

void Statevector::apply_x(int qubit) {
    check_qubit(qubit);
    const Eigen::Index stride = stride_of(num_qubits_, qubit);
    for (Eigen::Index base = 0; base < amps_.size(); base += 2 * stride) {
        for (Eigen::Index k = base; k < base + stride; ++k) {
            std::swap(amps_(k), amps_(k + stride));
        }
    }
}

void Statevector::apply_z(int qubit) {
    check_qubit(qubit);
    const Eigen::Index stride = stride_of(num_qubits_, qubit);
    for (Eigen::Index k = 0; k < amps_.size(); ++k) {
        if (k & stride) {
            amps_(k) = -amps_(k);
        }
    }
}

void Statevector::apply_iy(int qubit) {
    check_qubit(qubit);
    const Eigen::Index stride = stride_of(num_qubits_, qubit);
    for (Eigen::Index base = 0; base < amps_.size(); base += 2 * stride) {
        for (Eigen::Index k = base; k < base + stride; ++k) {
            const Complex a0 = amps_(k);
            const Complex a1 = amps_(k + stride);
            amps_(k) = a1;
            amps_(k + stride) = -a0;
        }
    }
}

Statevector zero_state(int num_qubits) { return Statevector(num_qubits); }

Complex inner_product(const Statevector &a, const Statevector &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("inner_product: dimension mismatch");
    }
    return a.amplitudes().dot(b.amplitudes());
}

} // namespace dvqls
