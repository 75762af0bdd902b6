#pragma once

// Dense complex tensors with the four primitives everything else is built on:
// contract, reshape, permute, truncated SVD.
//
// Layout convention: data is row-major over `dims`, i.e. the last index is
// fastest. Every index grouping elsewhere in the library (theta matricization,
// gate tensorization, MPO site layouts) is defined relative to this order.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/Dense>

#include "mpoeq/errors.hpp"

namespace mpoeq {

using cplx = std::complex<double>;
using RowMatrixXcd =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Tensor {
    std::vector<std::size_t> dims;
    std::vector<cplx> data;

    Tensor() = default;

    explicit Tensor(std::vector<std::size_t> d) : dims(std::move(d)) {
        data.assign(element_count(dims), cplx{0.0, 0.0});
    }

    Tensor(std::vector<std::size_t> d, std::vector<cplx> values)
        : dims(std::move(d)), data(std::move(values)) {
        if (element_count(dims) != data.size())
            throw TensorError("tensor: dims/data size mismatch");
    }

    static std::size_t element_count(const std::vector<std::size_t>& d) {
        std::size_t n = 1;
        for (auto e : d) {
            if (e < 1) throw TensorError("tensor: extent < 1");
            n *= e;
        }
        return n;
    }

    std::size_t rank() const { return dims.size(); }
    std::size_t size() const { return data.size(); }

    std::vector<std::size_t> strides() const {
        std::vector<std::size_t> s(dims.size());
        std::size_t acc = 1;
        for (std::size_t k = dims.size(); k-- > 0;) {
            s[k] = acc;
            acc *= dims[k];
        }
        return s;
    }

    cplx& at(std::initializer_list<std::size_t> idx) {
        return data[offset_of(idx)];
    }
    const cplx& at(std::initializer_list<std::size_t> idx) const {
        return data[offset_of(idx)];
    }

    double frobenius_norm() const {
        double acc = 0.0;
        for (const auto& v : data) acc += std::norm(v);
        return std::sqrt(acc);
    }

    bool finite() const {
        for (const auto& v : data)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    /// 2x2 identity, or the 2^k identity matrix via identity_matrix.
    static Tensor identity_matrix(std::size_t n) {
        Tensor t({n, n});
        for (std::size_t i = 0; i < n; ++i) t.data[i * n + i] = 1.0;
        return t;
    }

  private:
    std::size_t offset_of(std::initializer_list<std::size_t> idx) const {
        if (idx.size() != dims.size()) throw TensorError("tensor: wrong index rank");
        auto st = strides();
        std::size_t off = 0;
        std::size_t k = 0;
        for (auto i : idx) off += i * st[k++];
        return off;
    }
};

inline Tensor reshape(const Tensor& a, std::vector<std::size_t> new_dims) {
    if (Tensor::element_count(new_dims) != a.size())
        throw TensorError("reshape: element count mismatch (" +
                          std::to_string(a.size()) + " vs " +
                          std::to_string(Tensor::element_count(new_dims)) + ")");
    return Tensor(std::move(new_dims), a.data);
}

/// numpy-style transpose: result axis k is input axis perm[k], so
/// out[i0,...,ik] == in[j0,...,jk] with j[perm[k]] = i[k].
inline Tensor permute(const Tensor& a, const std::vector<std::size_t>& perm) {
    const std::size_t r = a.rank();
    if (perm.size() != r) throw TensorError("permute: wrong permutation length");
    std::vector<char> seen(r, 0);
    for (auto p : perm) {
        if (p >= r || seen[p]) throw TensorError("permute: not a permutation of 0..rank-1");
        seen[p] = 1;
    }
    std::vector<std::size_t> out_dims(r);
    for (std::size_t k = 0; k < r; ++k) out_dims[k] = a.dims[perm[k]];
    Tensor out(out_dims);
    if (r == 0) {
        out.data = a.data;
        return out;
    }
    const auto in_strides = a.strides();
    // stride in the input for each output axis
    std::vector<std::size_t> stride(r);
    for (std::size_t k = 0; k < r; ++k) stride[k] = in_strides[perm[k]];

    std::vector<std::size_t> idx(r, 0);
    std::size_t in_off = 0;
    const std::size_t total = out.size();
    for (std::size_t lin = 0; lin < total; ++lin) {
        out.data[lin] = a.data[in_off];
        for (std::size_t k = r; k-- > 0;) {
            if (++idx[k] < out_dims[k]) {
                in_off += stride[k];
                break;
            }
            idx[k] = 0;
            in_off -= stride[k] * (out_dims[k] - 1);
        }
    }
    return out;
}

namespace detail {
inline std::vector<std::size_t> complement_axes(std::size_t rank,
                                                const std::vector<std::size_t>& axes) {
    std::vector<char> used(rank, 0);
    for (auto a : axes) used[a] = 1;
    std::vector<std::size_t> rest;
    rest.reserve(rank - axes.size());
    for (std::size_t k = 0; k < rank; ++k)
        if (!used[k]) rest.push_back(k);
    return rest;
}
} // namespace detail

/// Pairwise tensor contraction: sum over axes_a of `a` against axes_b of `b`.
/// Result dims are the free dims of a (in order) followed by the free dims of b.
inline Tensor contract(const Tensor& a, const Tensor& b,
                       const std::vector<std::size_t>& axes_a,
                       const std::vector<std::size_t>& axes_b) {
    if (axes_a.size() != axes_b.size())
        throw TensorError("contract: axis lists differ in length");
    auto check_axes = [](const Tensor& t, const std::vector<std::size_t>& axes,
                         const char* which) {
        std::vector<char> seen(t.rank(), 0);
        for (auto ax : axes) {
            if (ax >= t.rank())
                throw TensorError(std::string("contract: axis out of range for ") + which);
            if (seen[ax])
                throw TensorError(std::string("contract: repeated axis for ") + which);
            seen[ax] = 1;
        }
    };
    check_axes(a, axes_a, "lhs");
    check_axes(b, axes_b, "rhs");
    for (std::size_t k = 0; k < axes_a.size(); ++k) {
        if (a.dims[axes_a[k]] != b.dims[axes_b[k]])
            throw TensorError("contract: extent mismatch at axis pair (" +
                              std::to_string(axes_a[k]) + "," + std::to_string(axes_b[k]) +
                              "): " + std::to_string(a.dims[axes_a[k]]) + " vs " +
                              std::to_string(b.dims[axes_b[k]]));
    }

    const auto free_a = detail::complement_axes(a.rank(), axes_a);
    const auto free_b = detail::complement_axes(b.rank(), axes_b);

    std::vector<std::size_t> perm_a = free_a;
    perm_a.insert(perm_a.end(), axes_a.begin(), axes_a.end());
    std::vector<std::size_t> perm_b = axes_b;
    perm_b.insert(perm_b.end(), free_b.begin(), free_b.end());

    const Tensor pa = permute(a, perm_a);
    const Tensor pb = permute(b, perm_b);

    std::size_t m = 1, k = 1, n = 1;
    for (auto ax : free_a) m *= a.dims[ax];
    for (auto ax : axes_a) k *= a.dims[ax];
    for (auto ax : free_b) n *= b.dims[ax];

    std::vector<std::size_t> out_dims;
    out_dims.reserve(free_a.size() + free_b.size());
    for (auto ax : free_a) out_dims.push_back(a.dims[ax]);
    for (auto ax : free_b) out_dims.push_back(b.dims[ax]);

    Tensor out(out_dims);
    Eigen::Map<const RowMatrixXcd> ma(pa.data.data(), m, k);
    Eigen::Map<const RowMatrixXcd> mb(pb.data.data(), k, n);
    Eigen::Map<RowMatrixXcd> mo(out.data.data(), m, n);
    mo.noalias() = ma * mb;
    return out;
}

struct SvdResult {
    Tensor u;               // a x chi
    std::vector<double> s;  // descending, length chi >= 1
    Tensor vh;              // chi x b
    double discarded_weight = 0.0;
};

/// Full SVD of a rank-2 tensor followed by a relative cutoff: singular values
/// s_k < threshold * s_1 are discarded (at least one is always kept).
inline SvdResult svd_truncated(const Tensor& m, double threshold) {
    if (m.rank() != 2) throw TensorError("svd: tensor is not rank-2");
    if (!(threshold >= 0.0) || threshold >= 1.0)
        throw TensorError("svd: threshold must be in [0,1)");
    if (!m.finite()) throw NumericError("svd: non-finite entries in input");

    const lapack_int rows = static_cast<lapack_int>(m.dims[0]);
    const lapack_int cols = static_cast<lapack_int>(m.dims[1]);
    const lapack_int kmin = std::min(rows, cols);

    std::vector<cplx> a = m.data;
    std::vector<double> sv(kmin);
    std::vector<cplx> u(static_cast<std::size_t>(rows) * kmin);
    std::vector<cplx> vt(static_cast<std::size_t>(kmin) * cols);

    lapack_int info = LAPACKE_zgesdd(LAPACK_ROW_MAJOR, 'S', rows, cols, a.data(), cols,
                                     sv.data(), u.data(), kmin, vt.data(), cols);
    if (info != 0) {
        // gesdd can fail to converge on rare inputs; gesvd is slower but sturdier.
        a = m.data;
        std::vector<double> superb(std::max<lapack_int>(1, kmin - 1));
        info = LAPACKE_zgesvd(LAPACK_ROW_MAJOR, 'S', 'S', rows, cols, a.data(), cols,
                              sv.data(), u.data(), kmin, vt.data(), cols, superb.data());
        if (info != 0) throw NumericError("svd: decomposition failed to converge");
    }

    const double cutoff = threshold * sv[0];
    lapack_int keep = 0;
    double discarded = 0.0;
    for (lapack_int i = 0; i < kmin; ++i) {
        if (i == 0 || sv[i] >= cutoff)
            keep = i + 1;
        else
            discarded += sv[i] * sv[i];
    }
    // singular values are sorted, so `keep` is a prefix; recompute discarded weight
    discarded = 0.0;
    for (lapack_int i = keep; i < kmin; ++i) discarded += sv[i] * sv[i];

    SvdResult r;
    r.u = Tensor({m.dims[0], static_cast<std::size_t>(keep)});
    for (lapack_int i = 0; i < rows; ++i)
        for (lapack_int j = 0; j < keep; ++j)
            r.u.data[static_cast<std::size_t>(i) * keep + j] = u[static_cast<std::size_t>(i) * kmin + j];
    r.s.assign(sv.begin(), sv.begin() + keep);
    r.vh = Tensor({static_cast<std::size_t>(keep), m.dims[1]});
    std::copy(vt.begin(), vt.begin() + static_cast<std::size_t>(keep) * cols, r.vh.data.begin());
    r.discarded_weight = discarded;
    return r;
}

/// vh with the singular values absorbed (diag(s) * vh), the right factor of a split.
inline Tensor absorb_singular_values_right(const SvdResult& r) {
    Tensor out = r.vh;
    const std::size_t chi = r.vh.dims[0];
    const std::size_t b = r.vh.dims[1];
    for (std::size_t i = 0; i < chi; ++i)
        for (std::size_t j = 0; j < b; ++j) out.data[i * b + j] *= r.s[i];
    return out;
}

} // namespace mpoeq
