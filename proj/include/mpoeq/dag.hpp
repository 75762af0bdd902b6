#pragma once

// Dependency view of a circuit as per-qubit gate chains. A gate is at the
// frontier once it is the earliest unconsumed gate on every qubit it touches;
// consuming gates in frontier order yields a topological order consistent with
// per-qubit program order.

#include <algorithm>
#include <vector>

#include "mpoeq/circuit.hpp"

namespace mpoeq {

class CircuitDag {
  public:
    explicit CircuitDag(const Circuit& c) : circuit_(&c) {
        c.validate();
        per_qubit_.resize(c.num_qubits);
        cursor_.assign(c.num_qubits, 0);
        consumed_.assign(c.gates.size(), false);
        for (int g = 0; g < static_cast<int>(c.gates.size()); ++g)
            for (int q : c.gates[g].qubits) per_qubit_[q].push_back(g);
        remaining_ = static_cast<int>(c.gates.size());
        remaining_on_qubit_.resize(c.num_qubits);
        for (int q = 0; q < c.num_qubits; ++q)
            remaining_on_qubit_[q] = static_cast<int>(per_qubit_[q].size());
    }

    const Circuit& circuit() const { return *circuit_; }
    int num_qubits() const { return circuit_->num_qubits; }
    bool empty() const { return remaining_ == 0; }
    int remaining() const { return remaining_; }
    int remaining_on_qubit(int q) const { return remaining_on_qubit_[q]; }

    std::size_t node_count() const { return circuit_->gates.size(); }

    std::size_t edge_count() const {
        std::size_t e = 0;
        for (const auto& chain : per_qubit_)
            if (!chain.empty()) e += chain.size() - 1;
        return e;
    }

    /// Earliest unconsumed gate on qubit q, or -1.
    int frontier_gate(int q) const {
        auto& chain = per_qubit_[q];
        std::size_t cur = cursor_[q];
        while (cur < chain.size() && consumed_[chain[cur]]) ++cur;
        return cur < chain.size() ? chain[cur] : -1;
    }

    bool ready(int gate_idx) const {
        for (int q : circuit_->gates[gate_idx].qubits)
            if (frontier_gate(q) != gate_idx) return false;
        return true;
    }

    void remove(int gate_idx) {
        if (consumed_[gate_idx]) throw Error("dag: gate already removed");
        if (!ready(gate_idx)) throw Error("dag: gate removed before its predecessors");
        consumed_[gate_idx] = true;
        --remaining_;
        for (int q : circuit_->gates[gate_idx].qubits) {
            --remaining_on_qubit_[q];
            // advance the cursor past consumed entries
            auto& chain = per_qubit_[q];
            while (cursor_[q] < chain.size() && consumed_[chain[cursor_[q]]]) ++cursor_[q];
        }
    }

    const Gate& gate(int gate_idx) const { return circuit_->gates[gate_idx]; }

  private:
    const Circuit* circuit_;
    std::vector<std::vector<int>> per_qubit_;
    mutable std::vector<std::size_t> cursor_;
    std::vector<bool> consumed_;
    std::vector<int> remaining_on_qubit_;
    int remaining_ = 0;
};

/// Pull the maximal frontier prefix of gates acting only on qubits {i, j},
/// in program order, removing them from the DAG. Stops at the first gate on
/// either qubit that touches a qubit outside the pair.
inline std::vector<Gate> extract_temporal_zone(CircuitDag& dag, int i, int j) {
    std::vector<Gate> zone;
    for (;;) {
        int pick = -1;
        for (int q : {i, j}) {
            int g = dag.frontier_gate(q);
            if (g < 0) continue;
            const Gate& gate = dag.gate(g);
            bool inside = true;
            for (int t : gate.qubits) inside = inside && (t == i || t == j);
            if (!inside || !dag.ready(g)) continue;
            if (pick < 0 || g < pick) pick = g;
        }
        if (pick < 0) return zone;
        zone.push_back(dag.gate(pick));
        dag.remove(pick);
    }
}

} // namespace mpoeq
