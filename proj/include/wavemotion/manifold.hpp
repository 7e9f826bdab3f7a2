// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WaveMotion Project Contributors

#pragma once

#include <string>
#include <utility>

#include "wavemotion/types.hpp"
#include "wavemotion/wavelet.hpp"

namespace wavemotion {

/// A motion clip: one row per frame, columns are the flattened (joint, axis)
/// coordinates, so data has 3*joints columns.
struct MotionSequence {
    Matrix data;
    double fps = 25.0;
    Index joints = 0;
};

inline MotionSequence make_motion(Matrix data, double fps = 25.0) {
    require(data.rows() >= 1 && data.cols() >= 1, "motion: empty data");
    require(data.cols() % 3 == 0, "motion: column count must be 3*joints");
    require(data.allFinite(), "motion: NaN/Inf entries");
    MotionSequence m;
    m.joints = data.cols() / 3;
    m.fps = fps;
    m.data = std::move(data);
    return m;
}

/// Concatenated four-subband representation, K x 4D, column blocks ordered
/// (ll, hl, lh, hh). The order is part of the format: decode splits on it.
struct WaveletManifold {
    Matrix data;
    std::pair<Index, Index> original_shape{0, 0};
    std::string basis_name;
};

inline WaveletManifold encode(const Matrix& motion, const WaveletBasis& basis) {
    require(motion.allFinite(), "encode: NaN/Inf entries");
    Subbands2D s = dwt2d(motion, basis);
    const Index k = s.ll.rows(), d = s.ll.cols();
    WaveletManifold m;
    m.data.resize(k, 4 * d);
    m.data << s.ll, s.hl, s.lh, s.hh;
    m.original_shape = s.original_shape;
    m.basis_name = basis.name;
    return m;
}

inline WaveletManifold encode(const MotionSequence& motion, const WaveletBasis& basis) {
    return encode(motion.data, basis);
}

inline Subbands2D split_manifold(const Matrix& data, std::pair<Index, Index> original_shape) {
    require(data.cols() % 4 == 0, "decode: column count not divisible by 4");
    const Index d = data.cols() / 4;
    Subbands2D s;
    s.ll = data.leftCols(d);
    s.hl = data.middleCols(d, d);
    s.lh = data.middleCols(2 * d, d);
    s.hh = data.rightCols(d);
    s.original_shape = original_shape;
    return s;
}

inline Matrix decode_matrix(const Matrix& manifold, std::pair<Index, Index> original_shape,
                            const WaveletBasis& basis) {
    return idwt2d(split_manifold(manifold, original_shape), basis);
}

inline MotionSequence decode(const WaveletManifold& manifold, const WaveletBasis& basis,
                             double fps = 25.0) {
    require(manifold.basis_name == basis.name,
            "decode: basis mismatch (manifold was encoded with " + manifold.basis_name + ")");
    MotionSequence m;
    m.data = decode_matrix(manifold.data, manifold.original_shape, basis);
    m.fps = fps;
    m.joints = m.data.cols() / 3;
    return m;
}

/// Extend an observed history to total_frames rows by repeating the last
/// observed frame (constant extrapolation).
inline Matrix pad_history(const Eigen::Ref<const Matrix>& history, Index total_frames) {
    require(history.rows() >= 1, "pad_history: empty history");
    require(history.rows() < total_frames,
            "pad_history: history length must be smaller than total_frames");
    Matrix out(total_frames, history.cols());
    out.topRows(history.rows()) = history;
    out.bottomRows(total_frames - history.rows()).rowwise() =
        history.row(history.rows() - 1);
    return out;
}

/// Per-channel standardization statistics, estimated on the training corpus
/// and stored with the model checkpoint.
struct ChannelStats {
    Vector mean;
    Vector stdev;
};

inline Matrix normalize(const Eigen::Ref<const Matrix>& motion, const ChannelStats& stats) {
    require(motion.cols() == stats.mean.size(), "normalize: channel count mismatch");
    return (motion.rowwise() - stats.mean.transpose()).array().rowwise() /
           stats.stdev.transpose().array();
}

inline Matrix denormalize(const Eigen::Ref<const Matrix>& motion, const ChannelStats& stats) {
    require(motion.cols() == stats.mean.size(), "denormalize: channel count mismatch");
    return (motion.array().rowwise() * stats.stdev.transpose().array()).matrix().rowwise() +
           stats.mean.transpose();
}

template <typename Range>
ChannelStats compute_stats(const Range& motions) {
    Index cols = -1;
    double count = 0;
    Vector sum, sumsq;
    for (const Matrix& m : motions) {
        if (cols < 0) {
            cols = m.cols();
            sum = Vector::Zero(cols);
            sumsq = Vector::Zero(cols);
        }
        require(m.cols() == cols, "compute_stats: inconsistent channel counts");
        sum += m.colwise().sum().transpose();
        sumsq += m.array().square().matrix().colwise().sum().transpose();
        count += static_cast<double>(m.rows());
    }
    require(count > 0, "compute_stats: empty corpus");
    ChannelStats s;
    s.mean = sum / count;
    s.stdev = ((sumsq / count).array() - s.mean.array().square()).max(0.0).sqrt();
    // constant channels get unit scale instead of a divide-by-zero
    s.stdev = s.stdev.array().max(1e-8);
    return s;
}

}  // namespace wavemotion
