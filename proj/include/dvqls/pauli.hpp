// Weighted Pauli-string operators (linear combinations of unitaries) and
// the block extraction that turns an n-qubit operator into the q-qubit
// operator of one partition block.

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dvqls/statevector.hpp"

namespace dvqls {

// One weighted Pauli string. Letters run over {I, X, Y, Z}, qubit 0 first.
// Y is representable but rejected wherever it would produce imaginary
// coefficients; the problem generators never emit it.
struct PauliTerm {
    double coefficient = 0.0;
    std::string letters;

    int num_qubits() const { return static_cast<int>(letters.size()); }
};

class LcuOperator {
  public:
    LcuOperator() = default;
    // Merges duplicate letter sequences by summing coefficients and drops
    // terms below the merge tolerance.
    LcuOperator(int num_qubits, std::vector<PauliTerm> terms);

    int num_qubits() const { return num_qubits_; }
    const std::vector<PauliTerm> &terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    LcuOperator scaled(double factor) const;

  private:
    int num_qubits_ = 0;
    std::vector<PauliTerm> terms_;
};

inline constexpr double kCoeffMergeTol = 1e-14;

// state <- coefficient * (P_0 x P_1 x ... ) state. Not renormalized.
void apply_pauli_string(Statevector &state, const PauliTerm &term);

// Product of two Pauli strings: phase * letters with |phase| = 1.
struct PauliProduct {
    Complex phase;
    std::string letters;
};
PauliProduct multiply_strings(const std::string &a, const std::string &b);

// Applies the unit-modulus string `phase * letters` (no real coefficient).
void apply_pauli_product(Statevector &state, const PauliProduct &prod);

// Dense real matrix of the operator. Requires num_qubits <= 13 and no Y
// letters (Y entries would be imaginary).
Eigen::MatrixXd to_dense(const LcuOperator &op);

// Sum over terms of coefficient * Pauli action; output is unnormalized.
Vector apply_lcu(const LcuOperator &op, const Statevector &state);

// q-qubit LCU of block (row, col) of the global operator. The top
// (n - q)-qubit part of each Pauli string is a signed permutation matrix,
// so each global term contributes at most one block term.
LcuOperator block_lcu(const LcuOperator &global, Eigen::Index row,
                      Eigen::Index col, int block_qubits);

// Textual format: one `<coeff> <letters>` per line, '#' starts a comment.
LcuOperator parse_pauli_sum(const std::string &text);
std::string format_pauli_sum(const LcuOperator &op);

} // namespace dvqls
