// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WaveMotion Project Contributors

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wavemotion/manifold.hpp"
#include "wavemotion/rng.hpp"
#include "wavemotion/types.hpp"

namespace wavemotion {

enum class SynthKind { SineWalk, Chirp, StopStart, Mixture };

SynthKind synth_kind_from_string(const std::string& s);
std::string to_string(SynthKind k);

/// One sinusoidal channel; exposed so tests can pin frequency and phase.
Vector synth_sine_channel(Index frames, double freq_hz, double phase, double amplitude,
                          double fps);

/// Synthetic motion clips standing in for mocap data. sine_walk draws
/// per-channel sinusoids with random frequency/phase; chirp sweeps frequency
/// linearly; stop_start alternates exact holds with sinusoidal segments
/// (discontinuous velocity); mixture blends draws of the other kinds.
MotionSequence synth_motion(SynthKind kind, Index frames, Index joints, Rng& rng,
                            double fps = 25.0);

/// Binary motion container ("WMOT"), bit-exact roundtrips; .csv paths use the
/// interoperable text format with header row frame,j0x,j0y,j0z,...
void save_motion(const std::string& path, const MotionSequence& motion);
MotionSequence load_motion(const std::string& path);

/// Manifold container ("WMAN") used by the encode/decode commands.
void save_manifold(const std::string& path, const WaveletManifold& manifold, double fps);
std::pair<WaveletManifold, double> load_manifold(const std::string& path);

struct Window {
    Matrix history;  // H x 3J
    Matrix future;   // F x 3J
};

struct MotionDataset {
    std::vector<MotionSequence> sequences;
    std::vector<Window> windows;
    Index history_frames = 0;
    Index future_frames = 0;
    Index skipped_sequences = 0;  // too short for one window
};

/// Sliding windows of H+F frames at the given stride; short sequences are
/// skipped and counted. Window count per sequence: floor((L-(H+F))/stride)+1.
MotionDataset make_windows(std::vector<MotionSequence> sequences, Index history_frames,
                           Index future_frames, Index stride);

}  // namespace wavemotion
