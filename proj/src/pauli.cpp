#include "dvqls/pauli.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace dvqls {

namespace {

void check_letters(const std::string &letters) {
    for (char c : letters) {
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
            throw std::invalid_argument("invalid Pauli letter '" +
                                        std::string(1, c) + "'");
        }
    }
}

Eigen::Matrix2d pauli_matrix_real(char letter) {
    Eigen::Matrix2d m;
    switch (letter) {
    case 'I':
        m << 1, 0, 0, 1;
        break;
    case 'X':
        m << 0, 1, 1, 0;
        break;
    case 'Z':
        m << 1, 0, 0, -1;
        break;
    default:
        throw std::invalid_argument(
            "to_dense: Y letters produce imaginary entries");
    }
    return m;
}

} // namespace

LcuOperator::LcuOperator(int num_qubits, std::vector<PauliTerm> terms)
    : num_qubits_(num_qubits) {
    if (num_qubits < 1) {
        throw std::invalid_argument("LcuOperator: qubit count must be >= 1");
    }
    std::map<std::string, double> merged;
    for (const auto &t : terms) {
        check_letters(t.letters);
        if (t.num_qubits() != num_qubits) {
            throw std::invalid_argument(
                "LcuOperator: term letter count does not match qubit count");
        }
        merged[t.letters] += t.coefficient;
    }
    for (const auto &[letters, coeff] : merged) {
        if (std::abs(coeff) >= kCoeffMergeTol) {
            terms_.push_back({coeff, letters});
        }
    }
}

LcuOperator LcuOperator::scaled(double factor) const {
    std::vector<PauliTerm> out = terms_;
    for (auto &t : out) {
        t.coefficient *= factor;
    }
    return LcuOperator(num_qubits_, std::move(out));
}

void apply_pauli_string(Statevector &state, const PauliTerm &term) {
    if (term.num_qubits() != state.num_qubits()) {
        throw std::invalid_argument("apply_pauli_string: qubit-count mismatch");
    }
    Complex phase(term.coefficient, 0.0);
    for (int q = 0; q < term.num_qubits(); ++q) {
        switch (term.letters[static_cast<size_t>(q)]) {
        case 'I':
            break;
        case 'X':
            state.apply_x(q);
            break;
        case 'Z':
            state.apply_z(q);
            break;
        case 'Y':
            state.apply_iy(q); // iY is real; fold the -i into the phase
            phase *= Complex(0.0, -1.0);
            break;
        default:
            throw std::invalid_argument("invalid Pauli letter");
        }
    }
    if (phase != Complex(1.0, 0.0)) {
        state.amplitudes() *= phase;
    }
}

PauliProduct multiply_strings(const std::string &a, const std::string &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("multiply_strings: length mismatch");
    }
    PauliProduct out{Complex(1.0, 0.0), std::string(a.size(), 'I')};
    const Complex pos_i(0.0, 1.0);
    const Complex neg_i(0.0, -1.0);
    for (size_t k = 0; k < a.size(); ++k) {
        const char x = a[k];
        const char y = b[k];
        if (x == 'I') {
            out.letters[k] = y;
        } else if (y == 'I') {
            out.letters[k] = x;
        } else if (x == y) {
            out.letters[k] = 'I';
        } else {
            // XY = iZ, YZ = iX, ZX = iY (cyclic); reversed order flips sign.
            static const std::string cyc = "XYZ";
            const size_t ix = cyc.find(x);
            const size_t iy = cyc.find(y);
            out.letters[k] = cyc[3 - ix - iy];
            out.phase *= ((iy == (ix + 1) % 3) ? pos_i : neg_i);
        }
    }
    return out;
}

void apply_pauli_product(Statevector &state, const PauliProduct &prod) {
    PauliTerm as_term{1.0, prod.letters};
    apply_pauli_string(state, as_term);
    if (prod.phase != Complex(1.0, 0.0)) {
        state.amplitudes() *= prod.phase;
    }
}

Eigen::MatrixXd to_dense(const LcuOperator &op) {
    if (op.num_qubits() > 13) {
        throw std::invalid_argument("to_dense: size cap exceeded");
    }
    const Eigen::Index dim = Eigen::Index{1} << op.num_qubits();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto &term : op.terms()) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(1, 1);
        for (char c : term.letters) {
            m = Eigen::kroneckerProduct(m, pauli_matrix_real(c)).eval();
        }
        out += term.coefficient * m;
    }
    return out;
}

Vector apply_lcu(const LcuOperator &op, const Statevector &state) {
    if (op.num_qubits() != state.num_qubits()) {
        throw std::invalid_argument("apply_lcu: dimension mismatch");
    }
    Vector out = Vector::Zero(state.dim());
    for (const auto &term : op.terms()) {
        Statevector scratch = state;
        apply_pauli_string(scratch, term);
        out += scratch.amplitudes();
    }
    return out;
}

LcuOperator block_lcu(const LcuOperator &global, Eigen::Index row,
                      Eigen::Index col, int block_qubits) {
    const int n = global.num_qubits();
    if (block_qubits < 1 || block_qubits >= n) {
        throw std::invalid_argument("block_lcu: invalid block qubit count");
    }
    const int top = n - block_qubits;
    const Eigen::Index grid = Eigen::Index{1} << top;
    if (row < 0 || row >= grid || col < 0 || col >= grid) {
        throw std::out_of_range("block_lcu: block index out of range");
    }
    std::vector<PauliTerm> out;
    for (const auto &term : global.terms()) {
        // The top part maps basis column `col` to exactly one row with a
        // +-1 entry; the term contributes to block (row, col) only if that
        // row matches.
        double sign = 1.0;
        Eigen::Index mapped = 0;
        bool imaginary = false;
        for (int q = 0; q < top; ++q) {
            const Eigen::Index bit = (col >> (top - 1 - q)) & 1;
            Eigen::Index out_bit = bit;
            switch (term.letters[static_cast<size_t>(q)]) {
            case 'I':
                break;
            case 'Z':
                if (bit) {
                    sign = -sign;
                }
                break;
            case 'X':
                out_bit = 1 - bit;
                break;
            case 'Y':
                imaginary = true;
                break;
            default:
                break;
            }
            mapped = (mapped << 1) | out_bit;
        }
        if (imaginary) {
            throw std::invalid_argument(
                "block_lcu: Y in the top qubits yields imaginary block "
                "coefficients (unsupported)");
        }
        if (mapped != row) {
            continue;
        }
        out.push_back({term.coefficient * sign,
                       term.letters.substr(static_cast<size_t>(top))});
    }
    if (out.empty()) {
        return LcuOperator(block_qubits, {});
    }
    return LcuOperator(block_qubits, std::move(out));
}

LcuOperator parse_pauli_sum(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    std::vector<PauliTerm> terms;
    int num_qubits = -1;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        double coeff;
        std::string letters;
        if (!(ls >> coeff)) {
            continue; // blank or comment-only line
        }
        if (!(ls >> letters)) {
            throw std::invalid_argument("pauli-sum parse: missing letters in '" +
                                        line + "'");
        }
        for (auto &c : letters) {
            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        }
        if (num_qubits < 0) {
            num_qubits = static_cast<int>(letters.size());
        } else if (static_cast<int>(letters.size()) != num_qubits) {
            throw std::invalid_argument(
                "pauli-sum parse: inconsistent letter counts");
        }
        terms.push_back({coeff, letters});
    }
    if (num_qubits < 1) {
        throw std::invalid_argument("pauli-sum parse: no terms");
    }
    return LcuOperator(num_qubits, std::move(terms));
}

std::string format_pauli_sum(const LcuOperator &op) {
    std::ostringstream out;
    out.precision(17);
    for (const auto &term : op.terms()) {
        out << term.coefficient << " " << term.letters << "\n";
    }
    return out.str();
}

} // namespace dvqls
