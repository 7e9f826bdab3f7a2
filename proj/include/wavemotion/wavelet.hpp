// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WaveMotion Project Contributors

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wavemotion/types.hpp"

namespace wavemotion {

/// One-level filter-bank DWT pair. Coefficients come from compiled-in tables;
/// the convention throughout is
///
///     forward:  a[k] = sum_n dec_lo[n] * x[2k+1-n]   (zero padding)
///               output length K = floor((N + l - 1) / 2)
///     inverse:  r[n] = sum_m rec_lo[n-2m] a[m] + rec_hi[n-2m] d[m]
///               output = r[l-2 : l-2+target_len]
///
/// The odd phase of the downsampler is the unique choice under which the
/// length law above is losslessly invertible for zero padding.
struct WaveletBasis {
    std::string name;
    Vector dec_lo;  // decomposition low-pass h
    Vector dec_hi;  // decomposition high-pass g
    Vector rec_lo;  // reconstruction low-pass h'
    Vector rec_hi;  // reconstruction high-pass g'
    Index length = 0;  // max filter length l (all four are stored equal-length)
};

/// Supported identifiers: haar, db9, sym9, sym10, coif3, coif5, bior2.8,
/// rbio2.8, bior6.8, dmey. Unknown names throw listing the supported set.
WaveletBasis make_basis(const std::string& name);
const std::vector<std::string>& supported_bases();

/// Boundary handling; only zero extension is supported.
enum class Padding { Zero };

inline Index dwt_output_length(Index n, Index filter_len) {
    return (n + filter_len - 1) / 2;
}

template <typename Derived>
std::pair<VectorX<typename Derived::Scalar>, VectorX<typename Derived::Scalar>>
dwt1d(const Eigen::MatrixBase<Derived>& signal, const WaveletBasis& basis,
      Padding = Padding::Zero) {
    using T = typename Derived::Scalar;
    const VectorX<T> x = signal;
    const Index n = x.size();
    require(n >= 1, "dwt1d: empty signal");
    const Index l = basis.length;
    const Index k_out = dwt_output_length(n, l);
    VectorX<T> a = VectorX<T>::Zero(k_out);
    VectorX<T> d = VectorX<T>::Zero(k_out);
    for (Index k = 0; k < k_out; ++k) {
        const Index base = 2 * k + 1;
        const Index n_lo = std::max<Index>(0, base - (n - 1));
        const Index n_hi = std::min<Index>(l - 1, base);
        T sa = 0, sd = 0;
        for (Index f = n_lo; f <= n_hi; ++f) {
            const T xi = x(base - f);
            sa += static_cast<T>(basis.dec_lo(f)) * xi;
            sd += static_cast<T>(basis.dec_hi(f)) * xi;
        }
        a(k) = sa;
        d(k) = sd;
    }
    return {std::move(a), std::move(d)};
}

template <typename DerivedA, typename DerivedD>
VectorX<typename DerivedA::Scalar>
idwt1d(const Eigen::MatrixBase<DerivedA>& approx, const Eigen::MatrixBase<DerivedD>& detail,
       const WaveletBasis& basis, Index target_len) {
    using T = typename DerivedA::Scalar;
    const VectorX<T> a = approx;
    const VectorX<T> d = detail;
    require(a.size() == d.size(), "idwt1d: approximation/detail length mismatch");
    require(a.size() >= 1, "idwt1d: empty coefficients");
    const Index k_in = a.size();
    const Index l = basis.length;
    const Index full = 2 * k_in + l - 2;
    require(target_len >= 1 && target_len <= 2 * k_in,
            "idwt1d: target_len inconsistent with coefficient length");
    VectorX<T> r = VectorX<T>::Zero(full);
    for (Index m = 0; m < k_in; ++m) {
        const T am = a(m), dm = d(m);
        for (Index f = 0; f < l; ++f)
            r(2 * m + f) += static_cast<T>(basis.rec_lo(f)) * am +
                            static_cast<T>(basis.rec_hi(f)) * dm;
    }
    return r.segment(l - 2, target_len);
}

/// Four subbands of a separable 2-D transform. First letter names the filter
/// applied along rows (time), second the filter along columns (features):
/// ll approximation, lh feature detail, hl row detail, hh cross detail.
struct Subbands2D {
    Matrix ll, lh, hl, hh;
    std::pair<Index, Index> original_shape{0, 0};
};

inline Subbands2D dwt2d(const Matrix& input, const WaveletBasis& basis) {
    const Index rows = input.rows(), cols = input.cols();
    require(rows >= 1 && cols >= 1, "dwt2d: empty matrix");
    const Index k_rows = dwt_output_length(rows, basis.length);
    const Index k_cols = dwt_output_length(cols, basis.length);

    Matrix lo(k_rows, cols), hi(k_rows, cols);
    for (Index c = 0; c < cols; ++c) {
        auto [a, d] = dwt1d(input.col(c), basis);
        lo.col(c) = a;
        hi.col(c) = d;
    }
    Subbands2D out;
    out.ll.resize(k_rows, k_cols);
    out.lh.resize(k_rows, k_cols);
    out.hl.resize(k_rows, k_cols);
    out.hh.resize(k_rows, k_cols);
    for (Index r = 0; r < k_rows; ++r) {
        auto [la, ld] = dwt1d(lo.row(r).transpose(), basis);
        out.ll.row(r) = la.transpose();
        out.lh.row(r) = ld.transpose();
        auto [ha, hd] = dwt1d(hi.row(r).transpose(), basis);
        out.hl.row(r) = ha.transpose();
        out.hh.row(r) = hd.transpose();
    }
    out.original_shape = {rows, cols};
    return out;
}

inline Matrix idwt2d(const Subbands2D& s, const WaveletBasis& basis) {
    const Index k_rows = s.ll.rows(), k_cols = s.ll.cols();
    auto same = [&](const Matrix& m) { return m.rows() == k_rows && m.cols() == k_cols; };
    require(same(s.lh) && same(s.hl) && same(s.hh), "idwt2d: inconsistent subband shapes");
    const auto [rows, cols] = s.original_shape;
    require(rows >= 1 && cols >= 1, "idwt2d: missing original shape");
    require(k_rows == dwt_output_length(rows, basis.length) &&
                k_cols == dwt_output_length(cols, basis.length),
            "idwt2d: subband shape inconsistent with original shape and basis");

    Matrix lo(k_rows, cols), hi(k_rows, cols);
    for (Index r = 0; r < k_rows; ++r) {
        lo.row(r) = idwt1d(s.ll.row(r).transpose(), s.lh.row(r).transpose(), basis, cols)
                        .transpose();
        hi.row(r) = idwt1d(s.hl.row(r).transpose(), s.hh.row(r).transpose(), basis, cols)
                        .transpose();
    }
    Matrix out(rows, cols);
    for (Index c = 0; c < cols; ++c)
        out.col(c) = idwt1d(lo.col(c), hi.col(c), basis, rows);
    return out;
}

}  // namespace wavemotion
