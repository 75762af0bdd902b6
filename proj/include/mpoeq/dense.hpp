#pragma once

// Brute-force ground truth: full 2^n x 2^n unitaries built by direct gate
// embedding (bit arithmetic, no tensor-network code path) and equivalence up
// to global phase. Exponential by design; hard-capped at n = 12.

#include <complex>

#include <Eigen/Dense>

#include "mpoeq/circuit.hpp"

namespace mpoeq {

inline constexpr int kDenseQubitCap = 12;

struct DenseUnitary {
    int n = 0;
    Eigen::MatrixXcd m;
};

/// In-place u <- E(g) * u where E(g) embeds the gate on its qubits
/// (qubit 0 = most significant bit of the row index).
inline void apply_gate_dense(Eigen::MatrixXcd& u, const Gate& g, int n) {
    const int k = static_cast<int>(g.qubits.size());
    const Tensor gm = gate_matrix(g);
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t gdim = std::size_t{1} << k;

    std::vector<std::size_t> bit(k);
    for (int j = 0; j < k; ++j) bit[j] = std::size_t{1} << (n - 1 - g.qubits[j]);
    std::size_t gate_mask = 0;
    for (auto b : bit) gate_mask |= b;

    std::vector<std::size_t> rows(gdim);
    Eigen::MatrixXcd block(gdim, u.cols());
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & gate_mask) continue;
        for (std::size_t gi = 0; gi < gdim; ++gi) {
            std::size_t r = base;
            for (int j = 0; j < k; ++j)
                if (gi & (gdim >> 1 >> j)) r |= bit[j];  // bit j of gi, MSB first
            rows[gi] = r;
        }
        for (std::size_t gi = 0; gi < gdim; ++gi) block.row(gi) = u.row(rows[gi]);
        for (std::size_t go = 0; go < gdim; ++go) {
            Eigen::RowVectorXcd acc = Eigen::RowVectorXcd::Zero(u.cols());
            for (std::size_t gi = 0; gi < gdim; ++gi)
                acc += gm.data[go * gdim + gi] * block.row(gi);
            u.row(rows[go]) = acc;
        }
    }
}

/// Product of gate embeddings, gates applied in program order (first gate
/// acts first, i.e. is the rightmost factor).
inline DenseUnitary dense_unitary(const Circuit& c) {
    c.validate();
    if (c.num_qubits > kDenseQubitCap)
        throw Error("dense_unitary: qubit count exceeds the dense cap");
    const std::size_t dim = std::size_t{1} << c.num_qubits;
    DenseUnitary out;
    out.n = c.num_qubits;
    out.m = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& g : c.gates) apply_gate_dense(out.m, g, c.num_qubits);
    return out;
}

struct OracleVerdict {
    bool equivalent = false;
    double phase = 0.0;  // recovered theta when equivalent
};

/// Equivalence up to global phase: D = U U'^dagger must be within tol
/// (max-norm) of e^{i theta} I, theta recovered from the first nonzero
/// diagonal entry.
inline OracleVerdict oracle_equivalent(const Circuit& g, const Circuit& g_prime, double tol) {
    if (g.num_qubits != g_prime.num_qubits)
        throw Error("oracle_equivalent: qubit count mismatch");
    const Eigen::MatrixXcd d =
        dense_unitary(g).m * dense_unitary(g_prime).m.adjoint();
    const Eigen::Index dim = d.rows();
    Eigen::Index pivot = -1;
    for (Eigen::Index i = 0; i < dim; ++i)
        if (std::abs(d(i, i)) > 0.5) {
            pivot = i;
            break;
        }
    if (pivot < 0) return {false, 0.0};
    const std::complex<double> phase = d(pivot, pivot) / std::abs(d(pivot, pivot));
    const double err = (d - phase * Eigen::MatrixXcd::Identity(dim, dim))
                           .cwiseAbs()
                           .maxCoeff();
    if (err > tol) return {false, 0.0};
    return {true, std::arg(phase)};
}

} // namespace mpoeq
