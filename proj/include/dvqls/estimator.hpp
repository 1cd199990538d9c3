// Evaluation of the inner-product primitives, the local cost C_ij, and all
// of its gradients. Exact mode uses direct statevector arithmetic; shots
// mode estimates every real-part overlap by ancilla Hadamard-test sampling,
// one seeded test per LCU term.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <utility>

#include "dvqls/ansatz.hpp"
#include "dvqls/pauli.hpp"
#include "dvqls/statevector.hpp"

namespace dvqls {

struct EstimatorMode {
    enum class Kind { exact, shots };
    Kind kind = Kind::exact;
    long num_shots = 1;
    std::uint64_t rng_seed = 0;

    static EstimatorMode exact() { return {}; }
    static EstimatorMode shots(long num_shots, std::uint64_t seed) {
        return {Kind::shots, num_shots, seed};
    }
};

// Deterministic sub-seed derivation (splitmix64-style hash combine), so
// sampled results are independent of evaluation order.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);
template <typename... Rest>
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, Rest... rest) {
    return mix_seed(mix_seed(a, b), rest...);
}

// Unbiased estimate of Re<bra|ket> from num_shots ancilla measurements of
// the overlap Hadamard-test circuit on q+1 qubits.
double hadamard_sample(const Statevector &bra, const Statevector &ket,
                       long num_shots, std::uint64_t seed);
// Re<0|W|0> given the prepared state W|0...0>.
double hadamard_sample(const Statevector &w_applied, long num_shots,
                       std::uint64_t seed);

// All per-call state the shots mode needs: a stream id (derived by the
// caller from run seed / agent / iteration) plus a running term counter.
struct ShotStream {
    std::uint64_t stream = 0;
    std::uint64_t term_counter = 0;

    std::uint64_t next(std::uint64_t base_seed) {
        return mix_seed(base_seed, stream, term_counter++);
    }
};

// Inputs of one agent's local cost: its block, its b-slice, and the
// augmented parameters of itself and its row-neighbors.
struct LocalCostInputs {
    LcuOperator block;        // A_ij
    Statevector b_state{1};   // |b_ij>, normalized
    double b_norm = 0.0;      // ||b_ij||
    AnsatzConfig ansatz;      // shared by U and V
    int self_index = 0;       // j
    AugmentedParams own_x;    // (alpha_ij, rho_ij)
    // Row-neighbor z parameters keyed by column index; must contain
    // self_index (the agent is its own row-neighbor).
    std::map<int, AugmentedParams> neighbor_z;

    void validate() const;
};

// Gradient of C_ij in augmented layout: [d/d angles; d/d scale].
struct GradRecord {
    Eigen::VectorXd d_alpha_tilde;
    std::map<int, Eigen::VectorXd> d_beta_tilde;
};

class Estimator {
  public:
    explicit Estimator(EstimatorMode mode) : mode_(mode) {}

    const EstimatorMode &mode() const { return mode_; }

    // <0|U'(a) Aij' Aij U(a)|0>
    double overlap_aa(const LcuOperator &block, const AnsatzConfig &cfg,
                      const Eigen::VectorXd &alpha, ShotStream *stream = nullptr) const;
    // Re <0|U'(a) Aij' V(b)|0>
    double overlap_ax_z(const LcuOperator &block, const AnsatzConfig &cfg,
                        const Eigen::VectorXd &alpha,
                        const Eigen::VectorXd &beta,
                        ShotStream *stream = nullptr) const;
    // Re <0|V'(bk) V(bl)|0>
    double overlap_zz(const AnsatzConfig &cfg, const Eigen::VectorXd &beta_k,
                      const Eigen::VectorXd &beta_l,
                      ShotStream *stream = nullptr) const;
    // Re <0|Uij' Aij U(a)|0>
    double overlap_b_ax(const Statevector &b_state, const LcuOperator &block,
                        const AnsatzConfig &cfg, const Eigen::VectorXd &alpha,
                        ShotStream *stream = nullptr) const;
    // Re <0|Uij' V(b)|0>
    double overlap_b_z(const Statevector &b_state, const AnsatzConfig &cfg,
                       const Eigen::VectorXd &beta,
                       ShotStream *stream = nullptr) const;

    double local_cost(const LocalCostInputs &inputs,
                      std::uint64_t stream = 0) const;
    GradRecord grad_cost(const LocalCostInputs &inputs,
                         std::uint64_t stream = 0) const;

  private:
    EstimatorMode mode_;

    double sample_or_exact(const Statevector &bra, const Statevector &ket,
                           ShotStream *stream) const;
};

} // namespace dvqls
