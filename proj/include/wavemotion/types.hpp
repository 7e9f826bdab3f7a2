// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WaveMotion Project Contributors

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>

namespace wavemotion {

using Index = Eigen::Index;

template <typename T>
using MatrixX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using VectorX = Eigen::Matrix<T, Eigen::Dynamic, 1>;

// Motion and wavelet math run in 64-bit; the denoiser is templated separately.
using Matrix = MatrixX<double>;
using Vector = VectorX<double>;

inline double rmse(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("rmse: shape mismatch");
    if (a.size() == 0) return 0.0;
    return std::sqrt((a - b).squaredNorm() / static_cast<double>(a.size()));
}

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace wavemotion
