// Dense statevector simulation for the small gate set {Ry, CZ, H, X, Z}
// used by the variational circuits and test circuits in this project.
//
// Convention: qubit 0 is the most significant bit of the basis index
// (leftmost tensor factor), so X on qubit 0 of |01> gives |11>.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace dvqls {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;

// Hard cap on dense simulation size; an ancilla qubit may push a
// (cap-1)-qubit register to the cap.
inline constexpr int kMaxQubits = 16;

class Statevector {
  public:
    explicit Statevector(int num_qubits);
    Statevector(int num_qubits, Vector amplitudes);

    int num_qubits() const { return num_qubits_; }
    Eigen::Index dim() const { return amps_.size(); }
    const Vector &amplitudes() const { return amps_; }
    Vector &amplitudes() { return amps_; }

    double norm() const { return amps_.norm(); }

    void apply_ry(int qubit, double angle);
    void apply_cz(int control, int target);
    void apply_h(int qubit);
    void apply_x(int qubit);
    void apply_z(int qubit);
    // Applies iY = [[0,1],[-1,0]] (the real form of Pauli-Y); callers that
    // need plain Y multiply by -i themselves.
    void apply_iy(int qubit);

  private:
    int num_qubits_;
    Vector amps_;

    void check_qubit(int qubit) const;
};

Statevector zero_state(int num_qubits);

// <a|b>, conjugate-linear in the first argument.
Complex inner_product(const Statevector &a, const Statevector &b);

} // namespace dvqls
