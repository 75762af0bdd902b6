#pragma once

// The intermediary MPO and its update moves: identity initialization, gate
// application on either physical side, truncated two-site splits, long-range
// subsweeps, trace, and the local identity test used for early stopping.
//
// Site tensor layout: (q, q', a_left, a_right) with physical extents 2.
// Gates from the first circuit contract the q (bottom) leg and compose by
// left-multiplication; inverted gates from the second circuit contract the
// q' (top) leg and compose by right-multiplication, so matching gates cancel
// pairwise through the identity.

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "mpoeq/gate_mpo.hpp"
#include "mpoeq/gates.hpp"
#include "mpoeq/tensor.hpp"

namespace mpoeq {

enum class Side { G, Gdag };

struct MPO {
    int n = 0;
    std::vector<Tensor> sites;

    std::vector<std::size_t> bond_dims() const {
        std::vector<std::size_t> chi;
        for (int i = 0; i + 1 < n; ++i) chi.push_back(sites[i].dims[3]);
        return chi;
    }

    std::size_t max_bond() const {
        std::size_t m = 1;
        for (const auto& t : sites) m = std::max(m, t.dims[3]);
        return m;
    }
};

inline MPO identity_mpo(int n) {
    if (n < 1) throw Error("identity_mpo: n must be >= 1");
    MPO w;
    w.n = n;
    w.sites.reserve(n);
    for (int i = 0; i < n; ++i) {
        Tensor t({2, 2, 1, 1});
        t.data[0] = 1.0;
        t.data[3] = 1.0;
        w.sites.push_back(std::move(t));
    }
    return w;
}

namespace mpo_detail {

// Theta layout used by all zone folds: (l, q1, q1', q2, q2', R) where R is the
// right bond, possibly merged with a gate bond during long-range subsweeps.

inline Tensor theta_build(const Tensor& wi, const Tensor& wj) {
    return permute(contract(wi, wj, {3}, {2}), {2, 0, 1, 3, 4, 5});
}

inline void fold_bottom_1q(Tensor& theta, const Tensor& g, bool second_site) {
    if (!second_site)
        theta = permute(contract(g, theta, {1}, {1}), {1, 0, 2, 3, 4, 5});
    else
        theta = permute(contract(g, theta, {1}, {3}), {1, 2, 3, 0, 4, 5});
}

inline void fold_bottom_2q(Tensor& theta, const Tensor& g4) {
    theta = permute(contract(g4, theta, {2, 3}, {1, 3}), {2, 0, 3, 1, 4, 5});
}

inline void fold_top_1q(Tensor& theta, const Tensor& g, bool second_site) {
    if (!second_site)
        theta = permute(contract(theta, g, {2}, {0}), {0, 1, 5, 2, 3, 4});
    else
        theta = permute(contract(theta, g, {4}, {0}), {0, 1, 2, 3, 5, 4});
}

inline void fold_top_2q(Tensor& theta, const Tensor& g4) {
    theta = permute(contract(theta, g4, {2, 4}, {0, 1}), {0, 1, 4, 2, 5, 3});
}

/// Fold one zone gate into theta. `left_qubit` is the qubit at theta's first
/// physical slot. Gates from the Gdag side must already be inverted.
inline void fold_zone_gate(Tensor& theta, const Gate& g, int left_qubit, Side side) {
    for (int q : g.qubits)
        if (q != left_qubit && q != left_qubit + 1)
            throw Error("apply_zone: gate acts outside the qubit pair");
    if (g.qubits.size() == 1) {
        const bool second = g.qubits[0] == left_qubit + 1;
        if (side == Side::G)
            fold_bottom_1q(theta, gate_matrix(g), second);
        else
            fold_top_1q(theta, gate_matrix(g), second);
    } else {
        const Tensor t = tensorize_sorted(g);
        if (side == Side::G)
            fold_bottom_2q(theta, t);
        else
            fold_top_2q(theta, t);
    }
}

struct SplitResult {
    Tensor left;   // (q1, q1', l, chi)
    Tensor right;  // chi x (4*R) matrix, singular values absorbed
    std::size_t chi = 0;
};

inline SplitResult split_theta(const Tensor& theta, double threshold, std::size_t max_bond) {
    const std::size_t l = theta.dims[0];
    const std::size_t tail = theta.dims[5];
    SvdResult svd = svd_truncated(reshape(theta, {l * 4, 4 * tail}), threshold);
    std::size_t chi = svd.s.size();
    if (max_bond > 0 && chi > max_bond) chi = max_bond;
    if (chi < svd.s.size()) {
        // cap the bond: keep the leading chi columns/rows
        Tensor u({svd.u.dims[0], chi});
        for (std::size_t i = 0; i < svd.u.dims[0]; ++i)
            for (std::size_t j = 0; j < chi; ++j)
                u.data[i * chi + j] = svd.u.data[i * svd.u.dims[1] + j];
        svd.u = std::move(u);
        Tensor vh({chi, svd.vh.dims[1]});
        std::copy(svd.vh.data.begin(), svd.vh.data.begin() + chi * svd.vh.dims[1],
                  vh.data.begin());
        svd.vh = std::move(vh);
        svd.s.resize(chi);
    }
    SplitResult r;
    r.chi = chi;
    r.left = permute(reshape(svd.u, {l, 2, 2, chi}), {1, 2, 0, 3});
    r.right = absorb_singular_values_right(svd);
    return r;
}

} // namespace mpo_detail

/// Contract a 2x2 gate into one site. Side::G hits the q leg, Side::Gdag the
/// q' leg (the gate must already be the inverse when coming from G').
inline void apply_1qg(MPO& w, const Tensor& g, int site, Side side) {
    if (site < 0 || site >= w.n) throw Error("apply_1qg: site out of range");
    if (g.rank() != 2 || g.dims[0] != 2 || g.dims[1] != 2)
        throw Error("apply_1qg: gate must be 2x2");
    if (side == Side::G)
        w.sites[site] = contract(g, w.sites[site], {1}, {0});
    else
        w.sites[site] = permute(contract(w.sites[site], g, {1}, {0}), {0, 3, 1, 2});
}

/// Apply the temporal zones of both circuits at the pair (i, i+1) with one
/// SVD. zone_gdag gates must already be inverted; both lists are folded in
/// program order. Zones with only single-qubit gates skip the SVD entirely.
inline void apply_zone(MPO& w, const std::vector<Gate>& zone_g,
                       const std::vector<Gate>& zone_gdag, int i, double threshold,
                       std::size_t max_bond = 0) {
    if (i < 0 || i + 1 >= w.n) throw Error("apply_zone: pair out of range");
    if (zone_g.empty() && zone_gdag.empty()) return;

    bool any_2q = false;
    for (const auto& g : zone_g) any_2q = any_2q || g.qubits.size() == 2;
    for (const auto& g : zone_gdag) any_2q = any_2q || g.qubits.size() == 2;
    if (!any_2q) {
        for (const auto& g : zone_g) apply_1qg(w, gate_matrix(g), g.qubits[0], Side::G);
        for (const auto& g : zone_gdag) apply_1qg(w, gate_matrix(g), g.qubits[0], Side::Gdag);
        return;
    }

    Tensor theta = mpo_detail::theta_build(w.sites[i], w.sites[i + 1]);
    for (const auto& g : zone_g) mpo_detail::fold_zone_gate(theta, g, i, Side::G);
    for (const auto& g : zone_gdag) mpo_detail::fold_zone_gate(theta, g, i, Side::Gdag);

    auto split = mpo_detail::split_theta(theta, threshold, max_bond);
    const std::size_t r = theta.dims[5];
    w.sites[i] = std::move(split.left);
    w.sites[i + 1] = permute(reshape(split.right, {split.chi, 2, 2, r}), {1, 2, 0, 3});
}

/// Per-pair gate supplier used while a long-range subsweep is in flight:
/// returns (bottom gates, already-inverted top gates) for the pair (p, p+1).
using ZoneFeeder =
    std::function<std::pair<std::vector<Gate>, std::vector<Gate>>(int pair_left)>;

/// Sweep an exact gate MPO into the intermediary MPO from span_lo to span_hi,
/// splitting with the given threshold after each pair and absorbing the
/// singular values rightward.
inline void apply_long_range(MPO& w, const GateMPO& gm, Side side, double threshold,
                             const ZoneFeeder& feeder = nullptr, std::size_t max_bond = 0) {
    const int lo = gm.span_lo, hi = gm.span_hi;
    if (lo < 0 || hi >= w.n || lo >= hi) throw Error("apply_long_range: bad span");
    if (static_cast<int>(gm.sites.size()) != hi - lo + 1)
        throw Error("apply_long_range: site count does not match span");

    // carrier layout: (q, q', L, r, b) -- current site with the gate bond open
    Tensor carrier;
    {
        const Tensor& w0 = w.sites[lo];
        const Tensor& a0 = gm.sites[0];
        Tensor c;
        if (side == Side::G)
            c = permute(contract(a0, w0, {1}, {0}), {0, 3, 4, 5, 2, 1});
        else
            c = permute(contract(w0, a0, {1}, {0}), {0, 3, 1, 2, 5, 4});
        // trailing axis is the gate's dummy left bond (extent 1)
        carrier = reshape(c, {c.dims[0], c.dims[1], c.dims[2], c.dims[3], c.dims[4]});
    }

    for (int p = lo; p < hi; ++p) {
        Tensor theta7 = contract(carrier, w.sites[p + 1], {3}, {2});
        // (q1,q1',L,b,q2,q2',r2)
        const Tensor& a = gm.sites[p + 1 - lo];
        Tensor theta;
        if (side == Side::G)
            theta = permute(contract(theta7, a, {4, 3}, {1, 2}), {2, 0, 1, 5, 3, 4, 6});
        else
            theta = permute(contract(theta7, a, {5, 3}, {0, 2}), {2, 0, 1, 3, 5, 4, 6});
        // (L,q1,q1',q2,q2',r2,b2) -> merge the MPO and gate bonds on the right
        const std::size_t r2 = theta.dims[5];
        const std::size_t b2 = theta.dims[6];
        Tensor theta6 = reshape(theta, {theta.dims[0], 2, 2, 2, 2, r2 * b2});

        if (feeder) {
            auto [bottom, top] = feeder(p);
            for (const auto& g : bottom) mpo_detail::fold_zone_gate(theta6, g, p, Side::G);
            for (const auto& g : top) mpo_detail::fold_zone_gate(theta6, g, p, Side::Gdag);
        }

        auto split = mpo_detail::split_theta(theta6, threshold, max_bond);
        w.sites[p] = std::move(split.left);
        if (p + 1 == hi) {
            // the gate's dummy right bond closes here (b2 == 1)
            w.sites[p + 1] =
                permute(reshape(split.right, {split.chi, 2, 2, r2}), {1, 2, 0, 3});
        } else {
            carrier = permute(reshape(split.right, {split.chi, 2, 2, r2, b2}),
                              {1, 2, 0, 3, 4});
        }
    }
}

/// Tr[W] by chaining per-site traced transfer matrices; linear in n.
inline cplx trace(const MPO& w) {
    std::vector<cplx> v{1.0};
    for (const auto& site : w.sites) {
        const std::size_t l = site.dims[2], r = site.dims[3];
        std::vector<cplx> next(r, 0.0);
        for (std::size_t il = 0; il < l; ++il)
            for (std::size_t ir = 0; ir < r; ++ir) {
                // t(l,r) = sum_q site(q,q,l,r)
                const cplx t = site.data[(0 * 2 + 0) * l * r + il * r + ir] +
                               site.data[(1 * 2 + 1) * l * r + il * r + ir];
                next[ir] += v[il] * t;
            }
        v = std::move(next);
    }
    return v[0];
}

namespace mpo_detail {

struct LocalOverlap {
    cplx m[2][2];    // environment-contracted local operator
    double norm;     // Frobenius norm of m
    double scale;    // magnitude of the contraction inputs, for degeneracy checks
};

inline LocalOverlap local_overlap(const MPO& w, int site) {
    auto transfer = [](const Tensor& s) {
        const std::size_t l = s.dims[2], r = s.dims[3];
        Tensor t({l, r});
        for (std::size_t il = 0; il < l; ++il)
            for (std::size_t ir = 0; ir < r; ++ir)
                t.data[il * r + ir] = s.data[il * r + ir] + s.data[3 * l * r + il * r + ir];
        return t;
    };
    const std::size_t l = w.sites[site].dims[2], r = w.sites[site].dims[3];
    std::vector<cplx> left(l, 0.0), right(r, 0.0);
    {
        std::vector<cplx> v{1.0};
        for (int i = 0; i < site; ++i) {
            Tensor t = transfer(w.sites[i]);
            std::vector<cplx> next(t.dims[1], 0.0);
            for (std::size_t a = 0; a < t.dims[0]; ++a)
                for (std::size_t b = 0; b < t.dims[1]; ++b) next[b] += v[a] * t.data[a * t.dims[1] + b];
            v = std::move(next);
        }
        left = std::move(v);
    }
    {
        std::vector<cplx> v{1.0};
        for (int i = w.n - 1; i > site; --i) {
            Tensor t = transfer(w.sites[i]);
            std::vector<cplx> next(t.dims[0], 0.0);
            for (std::size_t a = 0; a < t.dims[0]; ++a)
                for (std::size_t b = 0; b < t.dims[1]; ++b) next[a] += t.data[a * t.dims[1] + b] * v[b];
            v = std::move(next);
        }
        right = std::move(v);
    }

    LocalOverlap out{};
    const Tensor& s = w.sites[site];
    for (std::size_t q = 0; q < 2; ++q)
        for (std::size_t qp = 0; qp < 2; ++qp) {
            cplx acc = 0.0;
            for (std::size_t a = 0; a < l; ++a)
                for (std::size_t b = 0; b < r; ++b)
                    acc += left[a] * s.data[(q * 2 + qp) * l * r + a * r + b] * right[b];
            out.m[q][qp] = acc;
        }
    double nrm = 0.0;
    for (auto& row : out.m)
        for (auto& v : row) nrm += std::norm(v);
    out.norm = std::sqrt(nrm);
    double ln = 0.0, rn = 0.0;
    for (auto& v : left) ln += std::norm(v);
    for (auto& v : right) rn += std::norm(v);
    out.scale = std::sqrt(ln) * std::sqrt(rn) * s.frobenius_norm();
    return out;
}

} // namespace mpo_detail

/// Distance of a site from acting as a scalar multiple of the local identity,
/// with the rest of the chain traced out:
///   d = 1 - |Tr M| / (sqrt(2) * ||M||_F)
/// where M is the environment-contracted 2x2 local operator. d = 0 iff M is
/// proportional to I, d = 1 for traceless M (M = 0 is reported as 1).
inline double local_identity_distance(const MPO& w, int site) {
    if (site < 0 || site >= w.n) throw Error("local_identity_distance: site out of range");
    auto ov = mpo_detail::local_overlap(w, site);
    if (ov.norm == 0.0) return 1.0;
    const double tr = std::abs(ov.m[0][0] + ov.m[1][1]);
    return 1.0 - tr / (std::numbers::sqrt2 * ov.norm);
}

/// Contract the whole chain to a 2^n x 2^n matrix (row index: qubit 0 is the
/// most significant bit). Debug/test helper, n <= 12.
inline Tensor mpo_to_dense(const MPO& w) {
    if (w.n > 12) throw Error("mpo_to_dense: too many qubits");
    Tensor acc({1, 1, 1});
    acc.data[0] = 1.0;
    for (const auto& site : w.sites) {
        Tensor t = permute(contract(acc, site, {2}, {2}), {0, 2, 1, 3, 4});
        acc = reshape(t, {t.dims[0] * t.dims[1], t.dims[2] * t.dims[3], t.dims[4]});
    }
    return reshape(acc, {acc.dims[0], acc.dims[1]});
}

} // namespace mpoeq
