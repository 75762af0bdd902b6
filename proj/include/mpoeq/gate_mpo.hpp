#pragma once

// Exact MPO form of a multi-qubit gate over a span of sites. Interacting
// sites come from SVD splits of the gate tensor; sites the gate does not act
// on are identity tensors carrying the bond through. No truncation beyond
// numerical rank detection, so recontraction reproduces the dense gate.

#include <vector>

#include "mpoeq/gates.hpp"
#include "mpoeq/tensor.hpp"

namespace mpoeq {

struct GateMPO {
    // per-site rank-4 tensors, layout (q_out, q_in, b_left, b_right);
    // first b_left and last b_right have extent 1
    std::vector<Tensor> sites;
    int span_lo = 0;
    int span_hi = 0;

    std::size_t max_bond() const {
        std::size_t m = 1;
        for (const auto& t : sites) m = std::max(m, t.dims[3]);
        return m;
    }
};

namespace gate_mpo_detail {

// relative cutoff used to drop numerically-zero operator Schmidt coefficients
inline constexpr double kRankCutoff = 1e-12;

/// identity site (2,2,chi,chi): I on the physical pair, delta on the bond pair
inline Tensor bond_carrier(std::size_t chi) {
    Tensor t({2, 2, chi, chi});
    for (std::size_t q = 0; q < 2; ++q)
        for (std::size_t b = 0; b < chi; ++b)
            t.at({q, q, b, b}) = 1.0;
    return t;
}

/// two-site split of a 4x4 gate matrix given in ascending-qubit order
inline std::pair<Tensor, Tensor> split_two_site(const Tensor& sorted_rank4) {
    // (o1,o2,i1,i2) -> (o1,i1,o2,i2) -> 4x4, split between the sites
    Tensor grouped = reshape(permute(sorted_rank4, {0, 2, 1, 3}), {4, 4});
    SvdResult svd = svd_truncated(grouped, kRankCutoff);
    const std::size_t chi = svd.s.size();
    Tensor left = reshape(svd.u, {2, 2, 1, chi});
    Tensor right = reshape(permute(absorb_singular_values_right(svd), {1, 0}), {2, 2, chi, 1});
    // permute above moved (chi,(o2 i2)) to ((o2 i2),chi); regroup to (2,2,chi,1)
    return {std::move(left), std::move(right)};
}

} // namespace gate_mpo_detail

inline GateMPO decompose_gate_mpo(const Gate& g, int span_lo, int span_hi) {
    const std::size_t k = g.qubits.size();
    if (k < 2) throw CatalogError("decompose_gate_mpo: gate must act on >= 2 qubits");
    if (span_lo > span_hi) throw CatalogError("decompose_gate_mpo: empty span");
    for (int q : g.qubits)
        if (q < span_lo || q > span_hi)
            throw CatalogError("decompose_gate_mpo: span does not cover gate qubits");

    GateMPO out;
    out.span_lo = span_lo;
    out.span_hi = span_hi;
    const int m = span_hi - span_lo + 1;

    if (k == 2) {
        auto [a, b] = gate_mpo_detail::split_two_site(tensorize_sorted(g));
        const std::size_t chi = a.dims[3];
        const int lo = std::min(g.qubits[0], g.qubits[1]);
        const int hi = std::max(g.qubits[0], g.qubits[1]);
        for (int site = span_lo; site <= span_hi; ++site) {
            if (site < lo || site > hi)
                out.sites.push_back(gate_mpo_detail::bond_carrier(1));
            else if (site == lo)
                out.sites.push_back(a);
            else if (site == hi)
                out.sites.push_back(b);
            else
                out.sites.push_back(gate_mpo_detail::bond_carrier(chi));
        }
        return out;
    }

    // k > 2: sweep SVDs over the dense span operator, grouped site by site
    if (m > 12) throw CatalogError("decompose_gate_mpo: span too wide for a dense split");
    std::vector<int> sorted = g.qubits;
    std::sort(sorted.begin(), sorted.end());
    Tensor full = tensorize_sorted(g);  // (o_1..o_k, i_1..i_k) ascending gate qubits
    // extend with identity factors for span sites the gate skips
    Tensor eye = Tensor::identity_matrix(2);
    std::size_t extra = 0;
    for (int site = span_lo; site <= span_hi; ++site)
        if (std::find(sorted.begin(), sorted.end(), site) == sorted.end()) {
            full = contract(full, eye, {}, {});  // outer product, appends (o,i)
            ++extra;
        }
    // axes are (o_g1..o_gk, i_g1..i_gk, o_e1,i_e1, ...); build site-grouped order
    std::vector<std::size_t> perm;
    std::size_t next_extra = 2 * k;
    std::size_t gate_pos = 0;
    for (int site = span_lo; site <= span_hi; ++site) {
        if (std::find(sorted.begin(), sorted.end(), site) != sorted.end()) {
            perm.push_back(gate_pos);
            perm.push_back(k + gate_pos);
            ++gate_pos;
        } else {
            perm.push_back(next_extra);
            perm.push_back(next_extra + 1);
            next_extra += 2;
        }
    }
    Tensor current = permute(full, perm);  // (o_1,i_1, ..., o_m,i_m) by site
    std::size_t left_bond = 1;
    std::size_t tail = current.size();
    for (int s = 0; s < m - 1; ++s) {
        tail /= 4;
        SvdResult svd = svd_truncated(reshape(current, {left_bond * 4, tail}),
                                      gate_mpo_detail::kRankCutoff);
        const std::size_t chi = svd.s.size();
        Tensor site = permute(reshape(svd.u, {left_bond, 2, 2, chi}), {1, 2, 0, 3});
        out.sites.push_back(std::move(site));
        current = absorb_singular_values_right(svd);  // chi x tail
        left_bond = chi;
    }
    out.sites.push_back(reshape(permute(reshape(current, {left_bond, 2, 2}), {1, 2, 0}),
                                {2, 2, left_bond, 1}));
    return out;
}

/// Contract all sites to the dense operator on the span (row = outputs with the
/// lowest site as most significant digit). Intended for tests and small spans.
inline Tensor gate_mpo_to_dense(const GateMPO& gm) {
    // accumulator legs (O, I, bond)
    Tensor acc({1, 1, 1});
    acc.data[0] = 1.0;
    for (const auto& site : gm.sites) {
        Tensor t = contract(acc, site, {2}, {2});  // (O,I,o,i,r)
        t = permute(t, {0, 2, 1, 3, 4});
        acc = reshape(t, {t.dims[0] * t.dims[1], t.dims[2] * t.dims[3], t.dims[4]});
    }
    return reshape(acc, {acc.dims[0], acc.dims[1]});
}

} // namespace mpoeq
