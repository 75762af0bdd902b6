#pragma once

// Gate catalog with canonical matrices.
//
// Dense convention used everywhere: qubit 0 is the most significant bit of a
// basis index, and for a gate's own matrix the first listed qubit is the most
// significant digit.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mpoeq/errors.hpp"
#include "mpoeq/tensor.hpp"

namespace mpoeq {

enum class GateKind { I, X, SX, SXdg, H, Rx, Rz, Rzz, CZ, CX, Swap };

struct GateInfo {
    const char* name;  // qasm spelling
    int arity;         // qubit count
    int num_params;
};

inline const GateInfo& gate_info(GateKind k) {
    static const GateInfo table[] = {
        {"id", 1, 0},  {"x", 1, 0},   {"sx", 1, 0},  {"sxdg", 1, 0},
        {"h", 1, 0},   {"rx", 1, 1},  {"rz", 1, 1},  {"rzz", 2, 1},
        {"cz", 2, 0},  {"cx", 2, 0},  {"swap", 2, 0},
    };
    return table[static_cast<int>(k)];
}

inline std::optional<GateKind> gate_kind_from_name(std::string_view name) {
    for (int k = 0; k <= static_cast<int>(GateKind::Swap); ++k)
        if (name == gate_info(static_cast<GateKind>(k)).name)
            return static_cast<GateKind>(k);
    return std::nullopt;
}

struct Gate {
    GateKind kind;
    std::vector<double> params;
    std::vector<int> qubits;

    bool operator==(const Gate&) const = default;
};

inline Gate make_gate(GateKind k, std::vector<int> qubits, std::vector<double> params = {}) {
    const auto& info = gate_info(k);
    if (static_cast<int>(qubits.size()) != info.arity)
        throw CatalogError(std::string(info.name) + ": expected " +
                           std::to_string(info.arity) + " qubit(s)");
    if (static_cast<int>(params.size()) != info.num_params)
        throw CatalogError(std::string(info.name) + ": expected " +
                           std::to_string(info.num_params) + " parameter(s)");
    for (std::size_t i = 0; i < qubits.size(); ++i)
        for (std::size_t j = i + 1; j < qubits.size(); ++j)
            if (qubits[i] == qubits[j])
                throw CatalogError(std::string(info.name) + ": repeated qubit target");
    return Gate{k, std::move(params), std::move(qubits)};
}

/// Canonical 2^k x 2^k unitary of a gate (first listed qubit = most significant).
inline Tensor gate_matrix(const Gate& g) {
    const cplx i1{0.0, 1.0};
    switch (g.kind) {
        case GateKind::I:
            return Tensor({2, 2}, {1, 0, 0, 1});
        case GateKind::X:
            return Tensor({2, 2}, {0, 1, 1, 0});
        case GateKind::SX:
            return Tensor({2, 2}, {cplx(0.5, 0.5), cplx(0.5, -0.5),
                                   cplx(0.5, -0.5), cplx(0.5, 0.5)});
        case GateKind::SXdg:
            return Tensor({2, 2}, {cplx(0.5, -0.5), cplx(0.5, 0.5),
                                   cplx(0.5, 0.5), cplx(0.5, -0.5)});
        case GateKind::H: {
            const double s = 1.0 / std::numbers::sqrt2;
            return Tensor({2, 2}, {s, s, s, -s});
        }
        case GateKind::Rx: {
            const double c = std::cos(g.params[0] / 2.0);
            const double s = std::sin(g.params[0] / 2.0);
            return Tensor({2, 2}, {c, -i1 * s, -i1 * s, c});
        }
        case GateKind::Rz: {
            const cplx em = std::exp(-i1 * (g.params[0] / 2.0));
            const cplx ep = std::exp(i1 * (g.params[0] / 2.0));
            return Tensor({2, 2}, {em, 0, 0, ep});
        }
        case GateKind::Rzz: {
            const cplx em = std::exp(-i1 * (g.params[0] / 2.0));
            const cplx ep = std::exp(i1 * (g.params[0] / 2.0));
            Tensor t({4, 4});
            t.data[0] = em;
            t.data[5] = ep;
            t.data[10] = ep;
            t.data[15] = em;
            return t;
        }
        case GateKind::CZ: {
            Tensor t = Tensor::identity_matrix(4);
            t.data[15] = -1.0;
            return t;
        }
        case GateKind::CX: {
            Tensor t({4, 4});
            t.data[0] = 1.0;
            t.data[5] = 1.0;
            t.data[2 * 4 + 3] = 1.0;
            t.data[3 * 4 + 2] = 1.0;
            return t;
        }
        case GateKind::Swap: {
            Tensor t({4, 4});
            t.data[0] = 1.0;
            t.data[1 * 4 + 2] = 1.0;
            t.data[2 * 4 + 1] = 1.0;
            t.data[15] = 1.0;
            return t;
        }
    }
    throw CatalogError("unknown gate kind");
}

/// Rank-2k view of the gate matrix, index order (out_1..out_k, in_1..in_k).
inline Tensor tensorize(const Gate& g) {
    const std::size_t k = g.qubits.size();
    return reshape(gate_matrix(g), std::vector<std::size_t>(2 * k, 2));
}

inline Gate inverse(const Gate& g) {
    switch (g.kind) {
        case GateKind::SX:
            return Gate{GateKind::SXdg, {}, g.qubits};
        case GateKind::SXdg:
            return Gate{GateKind::SX, {}, g.qubits};
        case GateKind::Rx:
        case GateKind::Rz:
        case GateKind::Rzz:
            return Gate{g.kind, {-g.params[0]}, g.qubits};
        default:
            return g;  // I, X, H, CZ, CX, SWAP are self-inverse
    }
}

/// Gate tensor with its qubit axes reordered into ascending qubit order, e.g.
/// the rank-4 tensor of cx q[1],q[0] expressed with qubit 0 first.
inline Tensor tensorize_sorted(const Gate& g) {
    const std::size_t k = g.qubits.size();
    Tensor t = tensorize(g);
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return g.qubits[a] < g.qubits[b]; });
    std::vector<std::size_t> perm(2 * k);
    for (std::size_t i = 0; i < k; ++i) {
        perm[i] = order[i];
        perm[k + i] = k + order[i];
    }
    return permute(t, perm);
}

} // namespace mpoeq
