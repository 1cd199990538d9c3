#include "dvqls/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace dvqls {

namespace {

// Shift-rule prefactors. A term quadratic in the shifted circuit (the
// A'A overlap, where both bra and ket carry the parameter) differentiates
// with the 1/2 rule; terms linear in the shifted circuit have period 4*pi
// in the angle and carry 1/(2*sqrt(2)).
constexpr double kShiftQuadratic = 0.5;
const double kShiftLinear = 1.0 / (2.0 * std::sqrt(2.0));

struct OverlapTable {
    double aa = 0.0;
    double bx = 0.0;
    std::map<int, double> ax;
    std::map<int, double> bz;
    std::map<std::pair<int, int>, double> zz;
};

} // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a + 0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

double hadamard_sample(const Statevector &bra, const Statevector &ket,
                       long num_shots, std::uint64_t seed) {
    if (num_shots < 1) {
        throw std::invalid_argument("hadamard_sample: need num_shots >= 1");
    }
    if (bra.num_qubits() != ket.num_qubits()) {
        throw std::invalid_argument("hadamard_sample: dimension mismatch");
    }
    // Ancilla register: (|0>|bra> + |1>|ket>)/sqrt(2), then H on the
    // ancilla; P(ancilla = 0) = (1 + Re<bra|ket>)/2.
    const int q = bra.num_qubits();
    Vector amps(Eigen::Index{2} << q);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    amps.head(bra.dim()) = inv_sqrt2 * bra.amplitudes();
    amps.tail(ket.dim()) = inv_sqrt2 * ket.amplitudes();
    Statevector circuit(q + 1, std::move(amps));
    circuit.apply_h(0);
    double p0 = circuit.amplitudes().head(bra.dim()).squaredNorm();
    p0 = std::clamp(p0, 0.0, 1.0);

    std::mt19937_64 rng(seed);
    std::binomial_distribution<long> dist(num_shots, p0);
    const long zeros = dist(rng);
    return 2.0 * static_cast<double>(zeros) / static_cast<double>(num_shots) -
           1.0;
}

double hadamard_sample(const Statevector &w_applied, long num_shots,
                       std::uint64_t seed) {
    return hadamard_sample(Statevector(w_applied.num_qubits()), w_applied,
                           num_shots, seed);
}

void LocalCostInputs::validate() const {
    if (block.num_qubits() != ansatz.num_qubits ||
        b_state.num_qubits() != ansatz.num_qubits) {
        throw std::invalid_argument("LocalCostInputs: dimension mismatch");
    }
    if (neighbor_z.find(self_index) == neighbor_z.end()) {
        throw std::invalid_argument(
            "LocalCostInputs: neighbor_z must contain the agent's own index");
    }
    if (own_x.angles.size() != ansatz.param_count()) {
        throw std::invalid_argument("LocalCostInputs: own_x parameter count");
    }
    for (const auto &[k, params] : neighbor_z) {
        if (params.angles.size() != ansatz.param_count()) {
            throw std::invalid_argument(
                "LocalCostInputs: neighbor_z parameter count");
        }
    }
}

double Estimator::sample_or_exact(const Statevector &bra,
                                  const Statevector &ket,
                                  ShotStream *stream) const {
    if (mode_.kind == EstimatorMode::Kind::exact) {
        return inner_product(bra, ket).real();
    }
    ShotStream fallback;
    ShotStream *s = stream != nullptr ? stream : &fallback;
    return hadamard_sample(bra, ket, mode_.num_shots, s->next(mode_.rng_seed));
}

double Estimator::overlap_aa(const LcuOperator &block, const AnsatzConfig &cfg,
                             const Eigen::VectorXd &alpha,
                             ShotStream *stream) const {
    if (!block.empty() && block.num_qubits() != cfg.num_qubits) {
        throw std::invalid_argument("overlap_aa: dimension mismatch");
    }
    const Statevector x = prepare_state(cfg, alpha);
    if (mode_.kind == EstimatorMode::Kind::exact) {
        return apply_lcu(block, x).squaredNorm();
    }
    // Double LCU sum; each product A_h' A_h'' collapses to one signed
    // Pauli string, estimated by a single Hadamard test.
    double total = 0.0;
    const auto &terms = block.terms();
    for (const auto &th : terms) {
        for (const auto &tk : terms) {
            const PauliProduct prod = multiply_strings(th.letters, tk.letters);
            Statevector ket = x;
            apply_pauli_product(ket, prod);
            total += th.coefficient * tk.coefficient *
                     sample_or_exact(x, ket, stream);
        }
    }
    return total;
}

double Estimator::overlap_ax_z(const LcuOperator &block,
                               const AnsatzConfig &cfg,
                               const Eigen::VectorXd &alpha,
                               const Eigen::VectorXd &beta,
                               ShotStream *stream) const {
    if (!block.empty() && block.num_qubits() != cfg.num_qubits) {
        throw std::invalid_argument("overlap_ax_z: dimension mismatch");
    }
    const Statevector x = prepare_state(cfg, alpha);
    const Statevector z = prepare_state(cfg, beta);
    if (mode_.kind == EstimatorMode::Kind::exact) {
        return apply_lcu(block, x).dot(z.amplitudes()).real();
    }
    double total = 0.0;
    for (const auto &term : block.terms()) {
        Statevector bra = x;
        apply_pauli_string(bra, {1.0, term.letters});
        total += term.coefficient * sample_or_exact(bra, z, stream);
    }
    return total;
}

double Estimator::overlap_zz(const AnsatzConfig &cfg,
                             const Eigen::VectorXd &beta_k,
                             const Eigen::VectorXd &beta_l,
                             ShotStream *stream) const {
    if (beta_k.size() != beta_l.size()) {
        throw std::invalid_argument("overlap_zz: config mismatch");
    }
    const Statevector zk = prepare_state(cfg, beta_k);
    const Statevector zl = prepare_state(cfg, beta_l);
    return sample_or_exact(zk, zl, stream);
}

double Estimator::overlap_b_ax(const Statevector &b_state,
                               const LcuOperator &block,
                               const AnsatzConfig &cfg,
                               const Eigen::VectorXd &alpha,
                               ShotStream *stream) const {
    const Statevector x = prepare_state(cfg, alpha);
    if (mode_.kind == EstimatorMode::Kind::exact) {
        return b_state.amplitudes().dot(apply_lcu(block, x)).real();
    }
    double total = 0.0;
    for (const auto &term : block.terms()) {
        Statevector ket = x;
        apply_pauli_string(ket, {1.0, term.letters});
        total += term.coefficient * sample_or_exact(b_state, ket, stream);
    }
    return total;
}

double Estimator::overlap_b_z(const Statevector &b_state,
                              const AnsatzConfig &cfg,
                              const Eigen::VectorXd &beta,
                              ShotStream *stream) const {
    const Statevector z = prepare_state(cfg, beta);
    return sample_or_exact(b_state, z, stream);
}

namespace {

OverlapTable build_table(const Estimator &est, const LocalCostInputs &in,
                         ShotStream *stream) {
    OverlapTable t;
    t.aa = est.overlap_aa(in.block, in.ansatz, in.own_x.angles, stream);
    t.bx = est.overlap_b_ax(in.b_state, in.block, in.ansatz, in.own_x.angles,
                            stream);
    for (const auto &[k, zk] : in.neighbor_z) {
        t.ax[k] = est.overlap_ax_z(in.block, in.ansatz, in.own_x.angles,
                                   zk.angles, stream);
        t.bz[k] = est.overlap_b_z(in.b_state, in.ansatz, zk.angles, stream);
        for (const auto &[l, zl] : in.neighbor_z) {
            if (k > l) {
                t.zz[{k, l}] = t.zz[{l, k}]; // real states: symmetric
                continue;
            }
            t.zz[{k, l}] =
                est.overlap_zz(in.ansatz, zk.angles, zl.angles, stream);
        }
    }
    return t;
}

// Assembly of C_ij from the overlap table.
double assemble_cost(const LocalCostInputs &in, const OverlapTable &t) {
    const int j = in.self_index;
    const double rho = in.own_x.norm_scale;
    const double b = in.b_norm;
    const double sj = in.neighbor_z.at(j).norm_scale;

    double cost = rho * rho * t.aa + b * b - 2.0 * b * rho * t.bx;
    for (const auto &[k, zk] : in.neighbor_z) {
        const double sk = zk.norm_scale;
        cost += -2.0 * rho * (sj * t.ax.at(j) - sk * t.ax.at(k));
        cost += 2.0 * b * (sj * t.bz.at(j) - sk * t.bz.at(k));
        for (const auto &[l, zl] : in.neighbor_z) {
            const double sl = zl.norm_scale;
            cost += sj * sj * t.zz.at({j, j}) - sj * sl * t.zz.at({j, l}) -
                    sj * sk * t.zz.at({k, j}) + sk * sl * t.zz.at({k, l});
        }
    }
    return cost;
}

} // namespace

double Estimator::local_cost(const LocalCostInputs &inputs,
                             std::uint64_t stream) const {
    inputs.validate();
    ShotStream shot{stream, 0};
    const OverlapTable t = build_table(*this, inputs, &shot);
    return assemble_cost(inputs, t);
}

GradRecord Estimator::grad_cost(const LocalCostInputs &inputs,
                                std::uint64_t stream) const {
    inputs.validate();
    ShotStream shot{stream, 0};
    const OverlapTable t = build_table(*this, inputs, &shot);

    const int j = inputs.self_index;
    const double rho = inputs.own_x.norm_scale;
    const double b = inputs.b_norm;
    const double sj = inputs.neighbor_z.at(j).norm_scale;
    const Eigen::Index p = inputs.own_x.angles.size();

    GradRecord grad;
    grad.d_alpha_tilde = Eigen::VectorXd::Zero(p + 1);
    for (const auto &[k, zk] : inputs.neighbor_z) {
        grad.d_beta_tilde[k] = Eigen::VectorXd::Zero(p + 1);
    }

    // Norm-scale derivatives: C_ij is a quadratic polynomial in
    // (rho, sigma_k), so these come from the overlap table alone.
    double d_rho = 2.0 * rho * t.aa - 2.0 * b * t.bx;
    std::map<int, double> d_sigma;
    for (const auto &[k, zk] : inputs.neighbor_z) {
        d_sigma[k] = 0.0;
    }
    for (const auto &[k, zk] : inputs.neighbor_z) {
        const double sk = zk.norm_scale;
        d_rho += -2.0 * (sj * t.ax.at(j) - sk * t.ax.at(k));
        d_sigma[j] += -2.0 * rho * t.ax.at(j) + 2.0 * b * t.bz.at(j);
        d_sigma[k] += 2.0 * rho * t.ax.at(k) - 2.0 * b * t.bz.at(k);
        for (const auto &[l, zl] : inputs.neighbor_z) {
            const double sl = zl.norm_scale;
            d_sigma[j] += 2.0 * sj * t.zz.at({j, j}) - sl * t.zz.at({j, l}) -
                          sk * t.zz.at({k, j});
            d_sigma[l] += -sj * t.zz.at({j, l}) + sk * t.zz.at({k, l});
            d_sigma[k] += -sj * t.zz.at({k, j}) + sl * t.zz.at({k, l});
        }
    }
    grad.d_alpha_tilde(p) = d_rho;
    for (auto &[k, vec] : grad.d_beta_tilde) {
        vec(p) = d_sigma.at(k);
    }

    // Angle derivatives of alpha via the parameter shift rule.
    for (Eigen::Index h = 0; h < p; ++h) {
        Eigen::VectorXd plus = inputs.own_x.angles;
        Eigen::VectorXd minus = inputs.own_x.angles;
        plus(h) += std::numbers::pi / 2.0;
        minus(h) -= std::numbers::pi / 2.0;

        const double d_aa =
            kShiftQuadratic *
            (overlap_aa(inputs.block, inputs.ansatz, plus, &shot) -
             overlap_aa(inputs.block, inputs.ansatz, minus, &shot));
        const double d_bx =
            kShiftLinear *
            (overlap_b_ax(inputs.b_state, inputs.block, inputs.ansatz, plus,
                          &shot) -
             overlap_b_ax(inputs.b_state, inputs.block, inputs.ansatz, minus,
                          &shot));
        std::map<int, double> d_ax;
        for (const auto &[k, zk] : inputs.neighbor_z) {
            d_ax[k] = kShiftLinear *
                      (overlap_ax_z(inputs.block, inputs.ansatz, plus,
                                    zk.angles, &shot) -
                       overlap_ax_z(inputs.block, inputs.ansatz, minus,
                                    zk.angles, &shot));
        }

        double d = rho * rho * d_aa - 2.0 * b * rho * d_bx;
        for (const auto &[k, zk] : inputs.neighbor_z) {
            d += -2.0 * rho * (sj * d_ax.at(j) - zk.norm_scale * d_ax.at(k));
        }
        grad.d_alpha_tilde(h) = d;
    }

    // Angle derivatives of each neighbor's beta.
    for (const auto &[q, zq] : inputs.neighbor_z) {
        const double sq = zq.norm_scale;
        for (Eigen::Index h = 0; h < p; ++h) {
            Eigen::VectorXd plus = zq.angles;
            Eigen::VectorXd minus = zq.angles;
            plus(h) += std::numbers::pi / 2.0;
            minus(h) -= std::numbers::pi / 2.0;

            const double d_ax_q =
                kShiftLinear *
                (overlap_ax_z(inputs.block, inputs.ansatz,
                              inputs.own_x.angles, plus, &shot) -
                 overlap_ax_z(inputs.block, inputs.ansatz,
                              inputs.own_x.angles, minus, &shot));
            const double d_bz_q =
                kShiftLinear *
                (overlap_b_z(inputs.b_state, inputs.ansatz, plus, &shot) -
                 overlap_b_z(inputs.b_state, inputs.ansatz, minus, &shot));
            // One-sided derivative of Re<z_q|z_l> in the q argument; the
            // other side is identical because the states are real.
            std::map<int, double> d_zz_q;
            for (const auto &[l, zl] : inputs.neighbor_z) {
                if (l == q) {
                    d_zz_q[l] = 0.0; // norm is parameter-independent
                    continue;
                }
                d_zz_q[l] = kShiftLinear *
                            (overlap_zz(inputs.ansatz, plus, zl.angles, &shot) -
                             overlap_zz(inputs.ansatz, minus, zl.angles, &shot));
            }
            auto d_zz = [&](int a, int bb) {
                double v = 0.0;
                if (a == q) {
                    v += d_zz_q.at(bb);
                }
                if (bb == q) {
                    v += d_zz_q.at(a);
                }
                return v;
            };

            double d = 0.0;
            for (const auto &[k, zk] : inputs.neighbor_z) {
                const double sk = zk.norm_scale;
                if (j == q) {
                    d += -2.0 * rho * sj * d_ax_q + 2.0 * b * sj * d_bz_q;
                }
                if (k == q) {
                    d += 2.0 * rho * sk * d_ax_q - 2.0 * b * sk * d_bz_q;
                }
                for (const auto &[l, zl] : inputs.neighbor_z) {
                    const double sl = zl.norm_scale;
                    d += sj * sj * d_zz(j, j) - sj * sl * d_zz(j, l) -
                         sj * sk * d_zz(k, j) + sk * sl * d_zz(k, l);
                }
            }
            grad.d_beta_tilde.at(q)(h) = d;
        }
    }
    return grad;
}

} // namespace dvqls
