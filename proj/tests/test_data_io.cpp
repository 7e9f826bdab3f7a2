// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WaveMotion Project Contributors

#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "wavemotion/data_io.hpp"

using namespace wavemotion;

TEST_CASE("synth_motion: same seed, same sequence") {
    Rng a(5), b(5);
    const MotionSequence x = synth_motion(SynthKind::Mixture, 40, 3, a);
    const MotionSequence y = synth_motion(SynthKind::Mixture, 40, 3, b);
    CHECK((x.data - y.data).norm() == 0.0);
    CHECK(x.data.rows() == 40);
    CHECK(x.data.cols() == 9);
}

TEST_CASE("synth_motion: stop_start holds have exactly zero velocity") {
    Rng rng(6);
    const MotionSequence x = synth_motion(SynthKind::StopStart, 64, 2, rng);
    int exact_holds = 0;
    for (Index c = 0; c < x.data.cols(); ++c)
        for (Index f = 1; f < x.data.rows(); ++f)
            if (x.data(f, c) - x.data(f - 1, c) == 0.0) ++exact_holds;
    CHECK(exact_holds > 50);  // constant segments produce literal zeros
}

TEST_CASE("sine channel autocorrelation peaks at the period") {
    const double fps = 25.0, freq = 2.5;  // period = 10 frames
    const Vector v = synth_sine_channel(200, freq, 0.3, 1.0, fps);
    const Index period = static_cast<Index>(fps / freq);
    auto autocorr = [&](Index lag) {
        double acc = 0.0;
        for (Index f = 0; f + lag < v.size(); ++f) acc += v(f) * v(f + lag);
        return acc / double(v.size() - lag);
    };
    // the autocorrelation of a sinusoid repeats; take the first local peak
    Index first_peak = 0;
    for (Index lag = 2; lag < 40; ++lag)
        if (autocorr(lag) > 0.3 && autocorr(lag) >= autocorr(lag - 1) &&
            autocorr(lag) >= autocorr(lag + 1)) {
            first_peak = lag;
            break;
        }
    CHECK(first_peak == period);
}

TEST_CASE("synth_motion validates arguments") {
    Rng rng(7);
    CHECK_THROWS_AS(synth_motion(SynthKind::SineWalk, 4, 2, rng), std::invalid_argument);
    CHECK_THROWS_AS(synth_motion(SynthKind::SineWalk, 16, 0, rng), std::invalid_argument);
    CHECK_THROWS_AS(synth_kind_from_string("brownian"), std::invalid_argument);
}

TEST_CASE("binary motion file roundtrips bit-exactly") {
    Rng rng(8);
    const MotionSequence x = synth_motion(SynthKind::Chirp, 33, 4, rng, 30.0);
    const std::string path = "/tmp/wavemotion_io_test.wmot";
    save_motion(path, x);
    const MotionSequence back = load_motion(path);
    CHECK((back.data - x.data).norm() == 0.0);
    CHECK(back.fps == doctest::Approx(30.0));
    CHECK(back.joints == 4);
    std::remove(path.c_str());
}

TEST_CASE("truncated motion file reports the failing frame") {
    Rng rng(9);
    const MotionSequence x = synth_motion(SynthKind::SineWalk, 16, 2, rng);
    const std::string path = "/tmp/wavemotion_io_trunc.wmot";
    save_motion(path, x);
    {
        std::ifstream is(path, std::ios::binary);
        std::string all((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        os.write(all.data(), static_cast<std::streamsize>(all.size() / 2));
    }
    CHECK_THROWS_WITH_AS(load_motion(path), doctest::Contains("unexpected end of file"),
                         std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("csv motion fixture parses into the right shape") {
    const std::string path = "/tmp/wavemotion_io_test.csv";
    {
        std::ofstream os(path);
        os << "frame,j0x,j0y,j0z\n";
        os << "0,1.5,2.5,3.5\n";
        os << "1,4.5,5.5,6.5\n";
        os << "2,7.5,8.5,9.5\n";
    }
    const MotionSequence m = load_motion(path);
    CHECK(m.data.rows() == 3);
    CHECK(m.data.cols() == 3);
    CHECK(m.data(1, 2) == 6.5);
    CHECK(m.joints == 1);
    std::remove(path.c_str());
}

TEST_CASE("csv save/load roundtrip preserves values") {
    Rng rng(10);
    const MotionSequence x = synth_motion(SynthKind::SineWalk, 12, 2, rng);
    const std::string path = "/tmp/wavemotion_io_rt.csv";
    save_motion(path, x);
    const MotionSequence back = load_motion(path);
    CHECK(rmse(back.data, x.data) < 1e-15);
    std::remove(path.c_str());
}

TEST_CASE("manifold container roundtrips") {
    Rng rng(11);
    const WaveletBasis b = make_basis("bior2.8");
    const WaveletManifold m = encode(rng.normal_matrix(24, 9), b);
    const std::string path = "/tmp/wavemotion_io_test.wman";
    save_manifold(path, m, 25.0);
    auto [back, fps] = load_manifold(path);
    CHECK((back.data - m.data).norm() == 0.0);
    CHECK(back.original_shape == m.original_shape);
    CHECK(back.basis_name == m.basis_name);
    CHECK(fps == doctest::Approx(25.0));
    std::remove(path.c_str());
}

TEST_CASE("make_windows: counts follow the stride formula") {
    Rng rng(12);
    auto seq = [&](Index frames) { return synth_motion(SynthKind::SineWalk, frames, 1, rng); };
    SUBCASE("length 125 with H=25, F=100 gives exactly one window") {
        const MotionDataset ds = make_windows({seq(125)}, 25, 100, 1);
        CHECK(ds.windows.size() == 1);
        CHECK(ds.windows[0].history.rows() == 25);
        CHECK(ds.windows[0].future.rows() == 100);
    }
    SUBCASE("length 126, stride 1 gives two windows") {
        CHECK(make_windows({seq(126)}, 25, 100, 1).windows.size() == 2);
    }
    SUBCASE("stride 10 on length 225 gives eleven windows") {
        CHECK(make_windows({seq(225)}, 25, 100, 10).windows.size() == 11);
    }
    SUBCASE("short sequences are skipped and counted") {
        const MotionDataset ds = make_windows({seq(50), seq(125)}, 25, 100, 1);
        CHECK(ds.windows.size() == 1);
        CHECK(ds.skipped_sequences == 1);
    }
}
