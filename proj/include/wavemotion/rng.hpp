// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WaveMotion Project Contributors

#pragma once

#include <cmath>
#include <cstdint>

#include "wavemotion/types.hpp"

namespace wavemotion {

// Counter-based generator (splitmix64 of an advancing counter). Every draw is a
// pure function of (seed, stream, draw index), so runs replay exactly.
//
// Draw order contract, relied on by the determinism tests:
//   - matrices fill row-major;
//   - one normal consumes exactly two uniforms (Box-Muller, cosine branch);
//   - samplers draw in the order documented in sampler.hpp.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(seed + 0x9E3779B97F4A7C15ULL * (stream + 1)) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // one sample from N(0, 1); two uniforms consumed
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    // inclusive bounds; modulo bias is negligible for the spans used here
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    Matrix normal_matrix(Index rows, Index cols) {
        Matrix m(rows, cols);
        for (Index r = 0; r < rows; ++r)
            for (Index c = 0; c < cols; ++c) m(r, c) = normal();
        return m;
    }

    Vector normal_vector(Index n) {
        Vector v(n);
        for (Index i = 0; i < n; ++i) v(i) = normal();
        return v;
    }

private:
    std::uint64_t state_;
};

}  // namespace wavemotion
