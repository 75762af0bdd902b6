#include <catch_amalgamated.hpp>

#include <random>

#include "mpoeq/tensor.hpp"
#include "test_util.hpp"

using namespace mpoeq;
using testutil::max_abs_diff;
using testutil::naive_contract;
using testutil::random_tensor;

TEST_CASE("tensor construction and indexing") {
    Tensor t({2, 3});
    REQUIRE(t.rank() == 2);
    REQUIRE(t.size() == 6);
    t.at({1, 2}) = cplx(1.0, -2.0);
    REQUIRE(t.data[5] == cplx(1.0, -2.0));  // row-major: 1*3 + 2

    Tensor scalar(std::vector<std::size_t>{});
    REQUIRE(scalar.rank() == 0);
    REQUIRE(scalar.size() == 1);
}

TEST_CASE("reshape preserves data and rejects count mismatch") {
    std::mt19937_64 rng(1);
    Tensor t = random_tensor({4, 4}, rng);
    Tensor r = reshape(t, {2, 8});
    REQUIRE(r.dims == std::vector<std::size_t>{2, 8});
    REQUIRE(r.data == t.data);
    REQUIRE_THROWS_AS(reshape(t, {3, 5}), TensorError);
}

TEST_CASE("permute moves axes like a transpose") {
    Tensor t({2, 3});
    for (std::size_t i = 0; i < 6; ++i) t.data[i] = static_cast<double>(i);
    Tensor p = permute(t, {1, 0});
    REQUIRE(p.dims == std::vector<std::size_t>{3, 2});
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 2; ++c) REQUIRE(p.at({r, c}) == t.at({c, r}));

    // rank-3 cycle: output axis k draws from input axis perm[k]
    std::mt19937_64 rng(2);
    Tensor u = random_tensor({2, 3, 4}, rng);
    Tensor q = permute(u, {2, 0, 1});
    REQUIRE(q.dims == std::vector<std::size_t>{4, 2, 3});
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t c = 0; c < 3; ++c) REQUIRE(q.at({a, b, c}) == u.at({b, c, a}));

    REQUIRE_THROWS_AS(permute(u, {0, 0, 1}), TensorError);
}

TEST_CASE("contract matches the naive loop oracle") {
    std::mt19937_64 rng(3);
    struct Case {
        std::vector<std::size_t> da, db, axa, axb;
    };
    const std::vector<Case> cases{
        {{3, 4}, {4, 5}, {1}, {0}},
        {{2, 3, 4}, {4, 3, 2}, {1, 2}, {1, 0}},
        {{2, 2, 3}, {3, 2, 2, 2}, {2}, {0}},
        {{5}, {5}, {0}, {0}},
        {{2, 3}, {4, 2}, {}, {}},  // outer product
    };
    for (const auto& c : cases) {
        Tensor a = random_tensor(c.da, rng);
        Tensor b = random_tensor(c.db, rng);
        Tensor got = contract(a, b, c.axa, c.axb);
        Tensor want = naive_contract(a, b, c.axa, c.axb);
        REQUIRE(got.dims == want.dims);
        REQUIRE(max_abs_diff(got, want) < 1e-12);
    }
}

TEST_CASE("contract is bilinear") {
    std::mt19937_64 rng(4);
    Tensor a = random_tensor({3, 4}, rng);
    Tensor b = random_tensor({4, 2}, rng);
    const cplx alpha(0.7, -1.3);
    Tensor a_scaled = a;
    for (auto& v : a_scaled.data) v *= alpha;
    Tensor lhs = contract(a_scaled, b, {1}, {0});
    Tensor rhs = contract(a, b, {1}, {0});
    for (auto& v : rhs.data) v *= alpha;
    double scale = 0.0;
    for (const auto& v : rhs.data) scale = std::max(scale, std::abs(v));
    REQUIRE(max_abs_diff(lhs, rhs) < 1e-12 * scale);
}

TEST_CASE("contract rejects mismatched axis extents") {
    Tensor a({3, 4});
    Tensor b({5, 2});
    REQUIRE_THROWS_AS(contract(a, b, {1}, {0}), TensorError);
    REQUIRE_THROWS_AS(contract(a, b, {0}, {0, 1}), TensorError);
}

TEST_CASE("svd of the identity keeps both singular values") {
    SvdResult r = svd_truncated(Tensor::identity_matrix(2), 0.5);
    REQUIRE(r.s.size() == 2);
    REQUIRE(r.s[0] == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(r.s[1] == Catch::Approx(1.0).margin(1e-14));
    Tensor uv = contract(r.u, r.vh, {1}, {0});
    REQUIRE(max_abs_diff(uv, Tensor::identity_matrix(2)) < 1e-12);
    REQUIRE(r.discarded_weight == 0.0);
}

TEST_CASE("relative cutoff truncates diag(1, 1e-8) to rank 1") {
    Tensor m({2, 2}, {1.0, 0.0, 0.0, 1e-8});
    SvdResult r = svd_truncated(m, 1e-6);
    REQUIRE(r.s.size() == 1);
    REQUIRE(r.s[0] == Catch::Approx(1.0));
    REQUIRE(r.discarded_weight == Catch::Approx(1e-16));
}

TEST_CASE("at least one singular value is always kept") {
    Tensor m({2, 2}, {1e-30, 0.0, 0.0, 0.0});
    SvdResult r = svd_truncated(m, 0.99);
    REQUIRE(r.s.size() == 1);
}

TEST_CASE("threshold 0 reconstructs the input") {
    std::mt19937_64 rng(5);
    Tensor m = random_tensor({8, 6}, rng);
    SvdResult r = svd_truncated(m, 0.0);
    Tensor us = r.u;
    for (std::size_t row = 0; row < us.dims[0]; ++row)
        for (std::size_t col = 0; col < us.dims[1]; ++col)
            us.data[row * us.dims[1] + col] *= r.s[col];
    Tensor rec = contract(us, r.vh, {1}, {0});
    REQUIRE(max_abs_diff(rec, m) < 1e-10);
}

TEST_CASE("truncation error equals sqrt(discarded_weight)") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t a = 2 + rng() % 7, b = 2 + rng() % 7;
        Tensor m = random_tensor({a, b}, rng);
        const double threshold = std::pow(10.0, -1.0 - double(rng() % 4));
        SvdResult r = svd_truncated(m, threshold);
        Tensor rec = contract(r.u, absorb_singular_values_right(r), {1}, {0});
        double err2 = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) err2 += std::norm(m.data[i] - rec.data[i]);
        REQUIRE(std::sqrt(err2) == Catch::Approx(std::sqrt(r.discarded_weight)).margin(1e-9));
    }
}

TEST_CASE("singular values are sorted descending") {
    std::mt19937_64 rng(7);
    Tensor m = random_tensor({6, 9}, rng);
    SvdResult r = svd_truncated(m, 0.0);
    for (std::size_t i = 1; i < r.s.size(); ++i) REQUIRE(r.s[i - 1] >= r.s[i]);
}

TEST_CASE("absorb_singular_values_right scales vh rows") {
    std::mt19937_64 rng(8);
    Tensor m = random_tensor({4, 5}, rng);
    SvdResult r = svd_truncated(m, 0.0);
    Tensor sv = absorb_singular_values_right(r);
    for (std::size_t row = 0; row < sv.dims[0]; ++row)
        for (std::size_t col = 0; col < sv.dims[1]; ++col)
            REQUIRE(sv.data[row * sv.dims[1] + col] ==
                    r.vh.data[row * sv.dims[1] + col] * r.s[row]);
}

TEST_CASE("frobenius norm and finiteness") {
    Tensor t({2, 2}, {3.0, 0.0, 0.0, 4.0});
    REQUIRE(t.frobenius_norm() == Catch::Approx(5.0));
    REQUIRE(t.finite());
    t.data[1] = std::numeric_limits<double>::infinity();
    REQUIRE_FALSE(t.finite());
}
