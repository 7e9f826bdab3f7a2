// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WaveMotion Project Contributors

// Naive direct-sum references, kept independent of the library's transform
// path on purpose: these are the normative definitions the implementation is
// held against.

#pragma once

#include "wavemotion/types.hpp"
#include "wavemotion/wavelet.hpp"

namespace oracles {

using wavemotion::Index;
using wavemotion::Matrix;
using wavemotion::Vector;
using wavemotion::WaveletBasis;

// a[k] = sum_n h[n] x_zp[2k+1-n]; the odd sampling phase is the one choice
// under which K = floor((N+l-1)/2) coefficients capture the whole zero-padded
// convolution support.
inline std::pair<Vector, Vector> naive_dwt1d(const Vector& x, const WaveletBasis& b) {
    const Index n = x.size(), l = b.length;
    const Index k_out = (n + l - 1) / 2;
    Vector a = Vector::Zero(k_out), d = Vector::Zero(k_out);
    auto x_zp = [&](Index i) { return (i >= 0 && i < n) ? x(i) : 0.0; };
    for (Index k = 0; k < k_out; ++k)
        for (Index f = 0; f < l; ++f) {
            a(k) += b.dec_lo(f) * x_zp(2 * k + 1 - f);
            d(k) += b.dec_hi(f) * x_zp(2 * k + 1 - f);
        }
    return {a, d};
}

// x[n] = sum_m h'[n-2m] a[m] + g'[n-2m] d[m], evaluated over the full support
// and trimmed by the l-2 analysis/synthesis shift.
inline Vector naive_idwt1d(const Vector& a, const Vector& d, const WaveletBasis& b,
                           Index target_len) {
    const Index k_in = a.size(), l = b.length;
    const Index full = 2 * k_in + l - 2;
    Vector r = Vector::Zero(full);
    auto coef = [](const Vector& v, Index i) { return (i >= 0 && i < v.size()) ? v(i) : 0.0; };
    for (Index n = 0; n < full; ++n)
        for (Index m = 0; m < k_in; ++m) {
            const Index f = n - 2 * m;
            if (f >= 0 && f < l) r(n) += b.rec_lo(f) * coef(a, m) + b.rec_hi(f) * coef(d, m);
        }
    return r.segment(l - 2, target_len);
}

// y_{h,v}[k1,k2] = sum_i sum_j f_h[.] f_v[.] x[i,j] via two 1-D passes done
// the slow way (kept separate from the library's dwt2d).
inline wavemotion::Subbands2D naive_dwt2d(const Matrix& x, const WaveletBasis& b) {
    const Index rows = x.rows(), cols = x.cols();
    const Index kr = (rows + b.length - 1) / 2, kc = (cols + b.length - 1) / 2;
    Matrix lo(kr, cols), hi(kr, cols);
    for (Index c = 0; c < cols; ++c) {
        auto [a, d] = naive_dwt1d(x.col(c), b);
        lo.col(c) = a;
        hi.col(c) = d;
    }
    wavemotion::Subbands2D s;
    s.ll.resize(kr, kc);
    s.lh.resize(kr, kc);
    s.hl.resize(kr, kc);
    s.hh.resize(kr, kc);
    for (Index r = 0; r < kr; ++r) {
        auto [la, ld] = naive_dwt1d(lo.row(r).transpose(), b);
        auto [ha, hd] = naive_dwt1d(hi.row(r).transpose(), b);
        s.ll.row(r) = la.transpose();
        s.lh.row(r) = ld.transpose();
        s.hl.row(r) = ha.transpose();
        s.hh.row(r) = hd.transpose();
    }
    s.original_shape = {rows, cols};
    return s;
}

}  // namespace oracles
