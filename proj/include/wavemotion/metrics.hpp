// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WaveMotion Project Contributors

#pragma once

#include <vector>

#include "wavemotion/types.hpp"

namespace wavemotion {

/// Stochastic-prediction metrics. Per-frame distance is the L2 norm of the
/// 3J-vector; APD averages over unordered pairs of flattened samples.
/// ADE/FDE take the minimum over samples; the multi-modal variants average
/// ADE/FDE over a set of ground-truth futures.

/// Mean pairwise L2 distance between flattened samples; 0 for a single sample.
inline double apd(const std::vector<Matrix>& samples) {
    const std::size_t s = samples.size();
    if (s < 2) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i + 1; j < s; ++j) sum += (samples[i] - samples[j]).norm();
    return sum / (0.5 * static_cast<double>(s) * static_cast<double>(s - 1));
}

inline double ade(const std::vector<Matrix>& samples, const Matrix& gt) {
    require(!samples.empty(), "ade: empty sample set");
    double best = std::numeric_limits<double>::infinity();
    for (const Matrix& s : samples) {
        require(s.rows() == gt.rows() && s.cols() == gt.cols(), "ade: shape mismatch");
        const double v = (s - gt).rowwise().norm().mean();
        best = std::min(best, v);
    }
    return best;
}

inline double fde(const std::vector<Matrix>& samples, const Matrix& gt) {
    require(!samples.empty(), "fde: empty sample set");
    double best = std::numeric_limits<double>::infinity();
    const Index last = gt.rows() - 1;
    for (const Matrix& s : samples) {
        require(s.rows() == gt.rows() && s.cols() == gt.cols(), "fde: shape mismatch");
        best = std::min(best, (s.row(last) - gt.row(last)).norm());
    }
    return best;
}

inline double mmade(const std::vector<Matrix>& samples, const std::vector<Matrix>& mm_gt) {
    require(!mm_gt.empty(), "mmade: empty multi-modal ground-truth set");
    double sum = 0.0;
    for (const Matrix& gt : mm_gt) sum += ade(samples, gt);
    return sum / static_cast<double>(mm_gt.size());
}

inline double mmfde(const std::vector<Matrix>& samples, const std::vector<Matrix>& mm_gt) {
    require(!mm_gt.empty(), "mmfde: empty multi-modal ground-truth set");
    double sum = 0.0;
    for (const Matrix& gt : mm_gt) sum += fde(samples, gt);
    return sum / static_cast<double>(mm_gt.size());
}

struct PredictionSet {
    std::vector<Matrix> samples;  // S predicted futures, F x 3J each
    Matrix gt;                    // ground-truth future
    std::vector<Matrix> mm_gt;    // futures of similar observations
};

struct MetricValues {
    double apd = 0, ade = 0, fde = 0, mmade = 0, mmfde = 0;
};

inline MetricValues evaluate(const PredictionSet& p) {
    MetricValues v;
    v.apd = apd(p.samples);
    v.ade = ade(p.samples, p.gt);
    v.fde = fde(p.samples, p.gt);
    v.mmade = mmade(p.samples, p.mm_gt.empty() ? std::vector<Matrix>{p.gt} : p.mm_gt);
    v.mmfde = mmfde(p.samples, p.mm_gt.empty() ? std::vector<Matrix>{p.gt} : p.mm_gt);
    return v;
}

}  // namespace wavemotion
