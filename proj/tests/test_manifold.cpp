// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WaveMotion Project Contributors

#include <doctest.h>

#include "wavemotion/data_io.hpp"
#include "wavemotion/manifold.hpp"
#include "wavemotion/rng.hpp"

using namespace wavemotion;

TEST_CASE("encode: zero motion maps to the zero manifold") {
    const WaveletBasis b = make_basis("bior2.8");
    const WaveletManifold m = encode(Matrix::Zero(24, 9), b);
    CHECK(m.data.norm() == 0.0);
    CHECK(m.basis_name == "bior2.8");
}

TEST_CASE("encode: manifold shape for the 125x51 case is 71x136") {
    Rng rng(5);
    const WaveletManifold m = encode(rng.normal_matrix(125, 51), make_basis("bior2.8"));
    CHECK(m.data.rows() == 71);
    CHECK(m.data.cols() == 136);
    CHECK(m.original_shape == std::make_pair(Index(125), Index(51)));
}

TEST_CASE("decode(encode(x)) is the identity within 1e-10") {
    Rng rng(6);
    for (const auto& name : supported_bases()) {
        CAPTURE(name);
        const WaveletBasis b = make_basis(name);
        const MotionSequence x = make_motion(rng.normal_matrix(48, 15));
        const MotionSequence back = decode(encode(x, b), b);
        CHECK(rmse(back.data, x.data) < 1e-10);
    }
}

TEST_CASE("decode: zero manifold gives zero motion") {
    const WaveletBasis b = make_basis("haar");
    WaveletManifold m;
    m.data = Matrix::Zero(12, 4 * 5);
    m.original_shape = {24, 9};
    m.basis_name = "haar";
    CHECK(decode(m, b).data.norm() == 0.0);
}

TEST_CASE("decode: rejects column counts not divisible by 4 and basis mismatch") {
    const WaveletBasis haar = make_basis("haar");
    WaveletManifold m;
    m.data = Matrix::Zero(12, 10);
    m.original_shape = {24, 9};
    m.basis_name = "haar";
    CHECK_THROWS_AS(decode(m, haar), std::invalid_argument);
    m.data = Matrix::Zero(12, 20);
    m.basis_name = "db9";
    CHECK_THROWS_AS(decode(m, haar), std::invalid_argument);
}

TEST_CASE("subband concatenation order is load-bearing") {
    Rng rng(8);
    const WaveletBasis b = make_basis("bior2.8");
    const Matrix x = rng.normal_matrix(40, 12);
    WaveletManifold m = encode(x, b);
    const Index d = m.data.cols() / 4;
    // swap the 2nd and 3rd column blocks; decode must not reproduce x
    Matrix swapped = m.data;
    swapped.middleCols(d, d) = m.data.middleCols(2 * d, d);
    swapped.middleCols(2 * d, d) = m.data.middleCols(d, d);
    WaveletManifold reordered = m;
    reordered.data = swapped;
    const MotionSequence wrong = decode(reordered, b);
    CHECK(rmse(wrong.data, x) > 1e-3);
}

TEST_CASE("roundtrip preserves per-frame velocity") {
    Rng rng(9);
    const WaveletBasis b = make_basis("bior2.8");
    const MotionSequence x = synth_motion(SynthKind::SineWalk, 60, 4, rng);
    const MotionSequence back = decode(encode(x, b), b);
    const Matrix vel_in = x.data.bottomRows(59) - x.data.topRows(59);
    const Matrix vel_out = back.data.bottomRows(59) - back.data.topRows(59);
    CHECK(rmse(vel_out, vel_in) < 1e-9);
}

TEST_CASE("pad_history repeats the last observed frame") {
    Matrix h(2, 3);
    h << 1, 2, 3, 4, 5, 6;
    const Matrix p = pad_history(h, 4);
    REQUIRE(p.rows() == 4);
    CHECK(p.row(0) == h.row(0));
    CHECK(p.row(1) == h.row(1));
    CHECK(p.row(2) == h.row(1));
    CHECK(p.row(3) == h.row(1));
}

TEST_CASE("pad_history: 25 observed frames extend to 125") {
    Rng rng(10);
    const Matrix h = rng.normal_matrix(25, 51);
    const Matrix p = pad_history(h, 125);
    REQUIRE(p.rows() == 125);
    for (Index r = 25; r < 125; ++r) CHECK((p.row(r) - h.row(24)).norm() == 0.0);
    // padded history encodes to the model-facing shape with finite values
    const WaveletManifold m = encode(p, make_basis("bior2.8"));
    CHECK(m.data.rows() == 71);
    CHECK(m.data.cols() == 136);
    CHECK(m.data.allFinite());
}

TEST_CASE("pad_history is idempotent on already-padded prefixes") {
    Rng rng(12);
    const Matrix h = rng.normal_matrix(6, 9);
    const Matrix p = pad_history(h, 20);
    CHECK((pad_history(p.topRows(6), 20) - p).norm() == 0.0);
    CHECK((pad_history(p.topRows(13), 20) - p).norm() == 0.0);
}

TEST_CASE("pad_history rejects histories that already fill the window") {
    CHECK_THROWS_AS(pad_history(Matrix::Zero(5, 3), 5), std::invalid_argument);
    CHECK_THROWS_AS(pad_history(Matrix::Zero(7, 3), 5), std::invalid_argument);
}

TEST_CASE("normalization roundtrips and standardizes the corpus") {
    Rng rng(14);
    std::vector<Matrix> corpus;
    for (int i = 0; i < 4; ++i)
        corpus.push_back(rng.normal_matrix(30, 6) * 3.0 + Matrix::Constant(30, 6, 2.5));
    const ChannelStats stats = compute_stats(corpus);
    Matrix all(120, 6);
    for (int i = 0; i < 4; ++i) all.middleRows(30 * i, 30) = normalize(corpus[i], stats);
    CHECK(all.colwise().mean().cwiseAbs().maxCoeff() < 1e-12);
    const Matrix back = denormalize(normalize(corpus[0], stats), stats);
    CHECK(rmse(back, corpus[0]) < 1e-12);
}

TEST_CASE("make_motion validates shape and finiteness") {
    CHECK_THROWS_AS(make_motion(Matrix::Zero(4, 4)), std::invalid_argument);
    Matrix bad = Matrix::Zero(4, 3);
    bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(make_motion(bad), std::invalid_argument);
}
