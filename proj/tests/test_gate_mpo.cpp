#include <catch_amalgamated.hpp>

#include "mpoeq/dense.hpp"
#include "mpoeq/gate_mpo.hpp"
#include "test_util.hpp"

using namespace mpoeq;
using testutil::max_abs_diff;
using testutil::to_eigen;

namespace {

/// Dense embedding of a single gate on [0, span-1] via the brute-force path.
Tensor dense_embedding(const Gate& g, int span) {
    Circuit c;
    c.num_qubits = span;
    c.gates.push_back(g);
    const Eigen::MatrixXcd m = dense_unitary(c).m;
    Tensor out({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index col = 0; col < m.cols(); ++col)
            out.data[r * m.cols() + col] = m(r, col);
    return out;
}

std::size_t operator_schmidt_rank(const Gate& g) {
    // independent dense route: regroup the 4x4 into (site1 out/in) x (site2
    // out/in) and count nonzero singular values
    Tensor grouped = reshape(permute(tensorize_sorted(g), {0, 2, 1, 3}), {4, 4});
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(grouped));
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-10) ++rank;
    return rank;
}

} // namespace

TEST_CASE("CX splits with bond 2, SWAP with bond 4") {
    GateMPO cx = decompose_gate_mpo(make_gate(GateKind::CX, {0, 1}), 0, 1);
    REQUIRE(cx.sites.size() == 2);
    REQUIRE(cx.max_bond() == 2);
    REQUIRE(cx.max_bond() == operator_schmidt_rank(make_gate(GateKind::CX, {0, 1})));

    GateMPO swap = decompose_gate_mpo(make_gate(GateKind::Swap, {0, 1}), 0, 1);
    REQUIRE(swap.max_bond() == 4);
    REQUIRE(swap.max_bond() == operator_schmidt_rank(make_gate(GateKind::Swap, {0, 1})));

    // diagonal entanglers have rank 2
    GateMPO rzz = decompose_gate_mpo(make_gate(GateKind::Rzz, {0, 1}, {0.9}), 0, 1);
    REQUIRE(rzz.max_bond() == 2);
}

TEST_CASE("every catalog 2QG recontracts exactly") {
    for (GateKind k : {GateKind::Rzz, GateKind::CZ, GateKind::CX, GateKind::Swap}) {
        std::vector<double> params(gate_info(k).num_params, 1.234);
        Gate g = make_gate(k, {0, 1}, params);
        GateMPO gm = decompose_gate_mpo(g, 0, 1);
        REQUIRE(max_abs_diff(gate_mpo_to_dense(gm), dense_embedding(g, 2)) < 1e-10);
    }
}

TEST_CASE("long-range decomposition inserts identity carriers") {
    Gate cz = make_gate(GateKind::CZ, {0, 3});
    GateMPO gm = decompose_gate_mpo(cz, 0, 3);
    REQUIRE(gm.sites.size() == 4);
    // middle sites are bond carriers: I on physical, delta on bonds
    for (int s : {1, 2}) {
        const Tensor& t = gm.sites[s];
        REQUIRE(t.dims[2] == t.dims[3]);
        for (std::size_t q = 0; q < 2; ++q)
            for (std::size_t qq = 0; qq < 2; ++qq)
                for (std::size_t b = 0; b < t.dims[2]; ++b)
                    for (std::size_t bb = 0; bb < t.dims[3]; ++bb) {
                        const cplx want = (q == qq && b == bb) ? cplx(1.0) : cplx(0.0);
                        REQUIRE(std::abs(t.at({q, qq, b, bb}) - want) < 1e-12);
                    }
    }
    REQUIRE(max_abs_diff(gate_mpo_to_dense(gm), dense_embedding(cz, 4)) < 1e-10);
}

TEST_CASE("ranges 2 through 5 recontract against the dense oracle") {
    for (GateKind k : {GateKind::CZ, GateKind::CX, GateKind::Rzz, GateKind::Swap}) {
        for (int range = 2; range <= 5; ++range) {
            std::vector<double> params(gate_info(k).num_params, -0.71);
            Gate g = make_gate(k, {0, range - 1}, params);
            GateMPO gm = decompose_gate_mpo(g, 0, range - 1);
            REQUIRE(gm.sites.size() == static_cast<std::size_t>(range));
            REQUIRE(max_abs_diff(gate_mpo_to_dense(gm), dense_embedding(g, range)) < 1e-10);
        }
    }
}

TEST_CASE("descending qubit order is canonicalized, not ignored") {
    // CX(1,0) is not CX(0,1); the decomposition must match the permuted gate
    Gate rev = make_gate(GateKind::CX, {1, 0});
    GateMPO gm = decompose_gate_mpo(rev, 0, 1);
    REQUIRE(max_abs_diff(gate_mpo_to_dense(gm), dense_embedding(rev, 2)) < 1e-10);
    REQUIRE(max_abs_diff(gate_mpo_to_dense(gm),
                         dense_embedding(make_gate(GateKind::CX, {0, 1}), 2)) > 0.5);

    Gate rev_far = make_gate(GateKind::CX, {3, 1});
    GateMPO far = decompose_gate_mpo(rev_far, 0, 3);
    REQUIRE(max_abs_diff(gate_mpo_to_dense(far), dense_embedding(rev_far, 4)) < 1e-10);
}

TEST_CASE("span validation") {
    Gate cz = make_gate(GateKind::CZ, {0, 2});
    REQUIRE_THROWS_AS(decompose_gate_mpo(cz, 0, 1), CatalogError);  // span too short
    REQUIRE_THROWS_AS(decompose_gate_mpo(cz, 1, 2), CatalogError);  // misses qubit 0
    REQUIRE_THROWS_AS(decompose_gate_mpo(make_gate(GateKind::H, {0}), 0, 1), CatalogError);
}

TEST_CASE("bond extents chain consistently") {
    GateMPO gm = decompose_gate_mpo(make_gate(GateKind::Rzz, {1, 4}, {2.2}), 0, 5);
    REQUIRE(gm.sites.front().dims[2] == 1);
    REQUIRE(gm.sites.back().dims[3] == 1);
    for (std::size_t s = 0; s + 1 < gm.sites.size(); ++s)
        REQUIRE(gm.sites[s].dims[3] == gm.sites[s + 1].dims[2]);
    REQUIRE(max_abs_diff(gate_mpo_to_dense(gm),
                         dense_embedding(make_gate(GateKind::Rzz, {1, 4}, {2.2}), 6)) < 1e-10);
}
