#include <catch_amalgamated.hpp>

#include <random>

#include "mpoeq/gates.hpp"
#include "test_util.hpp"

using namespace mpoeq;
using testutil::max_abs_diff;
using testutil::to_eigen;

namespace {

Gate sample_gate(GateKind k) {
    const auto& info = gate_info(k);
    std::vector<double> params(info.num_params, 0.831);
    std::vector<int> qubits;
    for (int q = 0; q < info.arity; ++q) qubits.push_back(q);
    return make_gate(k, qubits, params);
}

const std::vector<GateKind> kAllKinds{GateKind::I,  GateKind::X,   GateKind::SX,
                                      GateKind::SXdg, GateKind::H, GateKind::Rx,
                                      GateKind::Rz, GateKind::Rzz, GateKind::CZ,
                                      GateKind::CX, GateKind::Swap};

} // namespace

TEST_CASE("every catalog matrix is unitary") {
    for (GateKind k : kAllKinds) {
        Eigen::MatrixXcd m = to_eigen(gate_matrix(sample_gate(k)));
        Eigen::MatrixXcd gg = m * m.adjoint();
        Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
        REQUIRE((gg - eye).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("fixed-point catalog entries") {
    REQUIRE(max_abs_diff(gate_matrix(make_gate(GateKind::Rz, {0}, {0.0})),
                         Tensor::identity_matrix(2)) < 1e-15);

    Tensor cz = gate_matrix(make_gate(GateKind::CZ, {0, 1}));
    Tensor cz_want({4, 4});
    cz_want.at({0, 0}) = 1.0;
    cz_want.at({1, 1}) = 1.0;
    cz_want.at({2, 2}) = 1.0;
    cz_want.at({3, 3}) = -1.0;
    REQUIRE(max_abs_diff(cz, cz_want) == 0.0);

    Tensor x = gate_matrix(make_gate(GateKind::X, {0}));
    REQUIRE(x.at({0, 1}) == cplx(1.0));
    REQUIRE(x.at({1, 0}) == cplx(1.0));

    // SX squared is X up to nothing at all (exact square root)
    Eigen::MatrixXcd sx = to_eigen(gate_matrix(make_gate(GateKind::SX, {0})));
    REQUIRE(((sx * sx) - to_eigen(x)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("Rzz agrees with an independent diagonal exponential") {
    // Rzz(theta) = exp(-i theta/2 * diag(1,-1,-1,1)); exponentiate the
    // diagonal directly instead of reusing the catalog formula
    const double zz[4] = {1.0, -1.0, -1.0, 1.0};
    for (double theta : {0.0, 0.31, -1.7, std::numbers::pi, 2.0 * std::numbers::pi}) {
        Tensor got = gate_matrix(make_gate(GateKind::Rzz, {0, 1}, {theta}));
        for (int d = 0; d < 4; ++d) {
            const cplx want = std::exp(cplx(0.0, -theta / 2.0 * zz[d]));
            REQUIRE(std::abs(got.at({std::size_t(d), std::size_t(d)}) - want) < 1e-15);
        }
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                if (r != c) REQUIRE(got.at({std::size_t(r), std::size_t(c)}) == cplx(0.0));
    }
    // the spec'd anchor: theta = pi
    Tensor rzz_pi = gate_matrix(make_gate(GateKind::Rzz, {0, 1}, {std::numbers::pi}));
    REQUIRE(std::abs(rzz_pi.at({0, 0}) - cplx(0.0, -1.0)) < 1e-15);
    REQUIRE(std::abs(rzz_pi.at({1, 1}) - cplx(0.0, 1.0)) < 1e-15);
    REQUIRE(std::abs(rzz_pi.at({2, 2}) - cplx(0.0, 1.0)) < 1e-15);
    REQUIRE(std::abs(rzz_pi.at({3, 3}) - cplx(0.0, -1.0)) < 1e-15);
}

TEST_CASE("tensorize reshapes without reordering") {
    Tensor x = tensorize(make_gate(GateKind::X, {0}));
    REQUIRE(x.dims == std::vector<std::size_t>{2, 2});
    REQUIRE(max_abs_diff(x, gate_matrix(make_gate(GateKind::X, {0}))) == 0.0);

    Tensor cz = tensorize(make_gate(GateKind::CZ, {0, 1}));
    REQUIRE(cz.dims == std::vector<std::size_t>{2, 2, 2, 2});
    REQUIRE(cz.at({1, 1, 1, 1}) == cplx(-1.0));
    REQUIRE(cz.at({0, 0, 0, 0}) == cplx(1.0));
    REQUIRE(cz.at({0, 1, 0, 1}) == cplx(1.0));
    REQUIRE(cz.at({1, 0, 1, 0}) == cplx(1.0));

    for (GateKind k : kAllKinds) {
        Gate g = sample_gate(k);
        Tensor round = reshape(tensorize(g), gate_matrix(g).dims);
        REQUIRE(round.data == gate_matrix(g).data);
    }
}

TEST_CASE("inverse composes to identity") {
    for (GateKind k : kAllKinds) {
        Gate g = sample_gate(k);
        Eigen::MatrixXcd m = to_eigen(gate_matrix(g));
        Eigen::MatrixXcd mi = to_eigen(gate_matrix(inverse(g)));
        Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
        REQUIRE((m * mi - eye).cwiseAbs().maxCoeff() < 1e-12);
    }
    // SX inverts to the dedicated dagger kind and back
    REQUIRE(inverse(make_gate(GateKind::SX, {0})).kind == GateKind::SXdg);
    REQUIRE(inverse(make_gate(GateKind::SXdg, {0})).kind == GateKind::SX);
    REQUIRE(inverse(make_gate(GateKind::Rx, {0}, {0.4})).params[0] == -0.4);
}

TEST_CASE("tensorize_sorted reorders descending qubit lists") {
    // CX(1,0): control on qubit 1, target on qubit 0. Sorted into ascending
    // qubit order this must be the "control on the second index" matrix.
    Tensor sorted = reshape(tensorize_sorted(make_gate(GateKind::CX, {1, 0})), {4, 4});
    Tensor want({4, 4});
    // |q0 q1>: flips q0 when q1 = 1
    want.at({0, 0}) = 1.0;  // 00 -> 00
    want.at({3, 1}) = 1.0;  // 01 -> 11
    want.at({2, 2}) = 1.0;  // 10 -> 10
    want.at({1, 3}) = 1.0;  // 11 -> 01
    REQUIRE(max_abs_diff(sorted, want) < 1e-15);

    // ascending input is untouched
    Tensor fwd = reshape(tensorize_sorted(make_gate(GateKind::CX, {0, 1})), {4, 4});
    REQUIRE(max_abs_diff(fwd, gate_matrix(make_gate(GateKind::CX, {0, 1}))) == 0.0);
}

TEST_CASE("make_gate validates qubits and params") {
    REQUIRE_THROWS_AS(make_gate(GateKind::Rz, {0}), CatalogError);        // missing angle
    REQUIRE_THROWS_AS(make_gate(GateKind::X, {0}, {1.0}), CatalogError);  // extra angle
    REQUIRE_THROWS_AS(make_gate(GateKind::CX, {1, 1}), CatalogError);     // duplicate qubit
    REQUIRE_THROWS_AS(make_gate(GateKind::CX, {0}), CatalogError);        // arity mismatch
}

TEST_CASE("gate names round-trip through the catalog") {
    for (GateKind k : kAllKinds) {
        auto back = gate_kind_from_name(gate_info(k).name);
        REQUIRE(back.has_value());
        REQUIRE(*back == k);
    }
    REQUIRE_FALSE(gate_kind_from_name("ccx").has_value());
}
