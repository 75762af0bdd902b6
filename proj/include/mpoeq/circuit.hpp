#pragma once

#include <vector>

#include "mpoeq/gates.hpp"

namespace mpoeq {

struct Circuit {
    int num_qubits = 0;
    std::vector<Gate> gates;  // program order

    bool operator==(const Circuit&) const = default;

    void validate() const {
        if (num_qubits < 1) throw CatalogError("circuit: num_qubits must be >= 1");
        for (const auto& g : gates) {
            const auto& info = gate_info(g.kind);
            if (static_cast<int>(g.qubits.size()) != info.arity ||
                static_cast<int>(g.params.size()) != info.num_params)
                throw CatalogError("circuit: malformed gate");
            for (int q : g.qubits)
                if (q < 0 || q >= num_qubits)
                    throw CatalogError("circuit: qubit index out of range");
        }
    }
};

/// Reverse the gate list and invert each gate.
inline Circuit dagger(const Circuit& c) {
    Circuit out;
    out.num_qubits = c.num_qubits;
    out.gates.reserve(c.gates.size());
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it)
        out.gates.push_back(inverse(*it));
    return out;
}

} // namespace mpoeq
