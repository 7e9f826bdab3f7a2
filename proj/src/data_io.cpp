// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WaveMotion Project Contributors

#include "wavemotion/data_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace wavemotion {

namespace {

static_assert(std::endian::native == std::endian::little, "file io assumes little-endian host");

template <typename T>
void write_pod(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
bool read_pod(std::istream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return static_cast<bool>(is);
}

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

MotionSequence load_motion_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_motion: cannot open: " + path);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("load_motion: empty csv: " + path);
    // header: frame,j0x,j0y,j0z,...
    std::size_t channels = 0;
    for (char ch : line)
        if (ch == ',') ++channels;
    if (channels == 0 || channels % 3 != 0)
        throw std::runtime_error("load_motion: csv header must be frame,j0x,j0y,j0z,...: " + path);
    std::vector<double> values;
    Index frames = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != channels + 1)
            throw std::runtime_error("load_motion: csv row " + std::to_string(frames) +
                                     " has wrong column count");
        values.insert(values.end(), row.begin() + 1, row.end());
        ++frames;
    }
    if (frames == 0) throw std::runtime_error("load_motion: csv has no data rows: " + path);
    Matrix data(frames, static_cast<Index>(channels));
    for (Index r = 0; r < frames; ++r)
        for (Index c = 0; c < data.cols(); ++c)
            data(r, c) = values[static_cast<std::size_t>(r * data.cols() + c)];
    if (!data.allFinite()) throw std::runtime_error("load_motion: NaN/Inf entries in " + path);
    return make_motion(std::move(data));
}

void save_motion_csv(const std::string& path, const MotionSequence& m) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_motion: cannot open for writing: " + path);
    os << "frame";
    for (Index j = 0; j < m.joints; ++j) os << ",j" << j << "x,j" << j << "y,j" << j << "z";
    os << "\n";
    os.precision(17);
    for (Index r = 0; r < m.data.rows(); ++r) {
        os << r;
        for (Index c = 0; c < m.data.cols(); ++c) os << ',' << m.data(r, c);
        os << "\n";
    }
}

}  // namespace

SynthKind synth_kind_from_string(const std::string& s) {
    if (s == "sine_walk") return SynthKind::SineWalk;
    if (s == "chirp") return SynthKind::Chirp;
    if (s == "stop_start") return SynthKind::StopStart;
    if (s == "mixture") return SynthKind::Mixture;
    throw std::invalid_argument("unknown synthetic motion kind \"" + s +
                                "\"; supported: sine_walk chirp stop_start mixture");
}

std::string to_string(SynthKind k) {
    switch (k) {
        case SynthKind::SineWalk: return "sine_walk";
        case SynthKind::Chirp: return "chirp";
        case SynthKind::StopStart: return "stop_start";
        case SynthKind::Mixture: return "mixture";
    }
    return "?";
}

Vector synth_sine_channel(Index frames, double freq_hz, double phase, double amplitude,
                          double fps) {
    Vector v(frames);
    for (Index f = 0; f < frames; ++f)
        v(f) = amplitude * std::sin(2.0 * M_PI * freq_hz * static_cast<double>(f) / fps + phase);
    return v;
}

namespace {

Matrix synth_channels(SynthKind kind, Index frames, Index channels, Rng& rng, double fps) {
    Matrix data(frames, channels);
    switch (kind) {
        case SynthKind::SineWalk: {
            // gait-like: one cadence per clip, per-channel phase and amplitude
            const double freq = 0.5 + 1.5 * rng.uniform();
            for (Index c = 0; c < channels; ++c) {
                const double phase = 2.0 * M_PI * rng.uniform();
                const double amp = 0.5 + rng.uniform();
                data.col(c) = synth_sine_channel(frames, freq, phase, amp, fps);
            }
            break;
        }
        case SynthKind::Chirp: {
            for (Index c = 0; c < channels; ++c) {
                const double f0 = 0.25 + 0.75 * rng.uniform();
                const double rate = (1.5 * rng.uniform()) / (static_cast<double>(frames) / fps);
                const double phase = 2.0 * M_PI * rng.uniform();
                const double amp = 0.5 + rng.uniform();
                for (Index f = 0; f < frames; ++f) {
                    const double tt = static_cast<double>(f) / fps;
                    data(f, c) = amp * std::sin(2.0 * M_PI * (f0 * tt + 0.5 * rate * tt * tt) + phase);
                }
            }
            break;
        }
        case SynthKind::StopStart: {
            for (Index c = 0; c < channels; ++c) {
                const double freq = 0.5 + 1.5 * rng.uniform();
                const double amp = 0.5 + rng.uniform();
                Index f = 0;
                double level = amp * std::sin(2.0 * M_PI * rng.uniform());
                bool moving = rng.uniform() < 0.5;
                double phase = 2.0 * M_PI * rng.uniform();
                while (f < frames) {
                    const Index seg = std::min<Index>(frames - f, 6 + rng.uniform_int(0, 10));
                    if (moving) {
                        for (Index i = 0; i < seg; ++i)
                            data(f + i, c) = level + amp * std::sin(2.0 * M_PI * freq *
                                                                        static_cast<double>(i) /
                                                                        fps + phase);
                        level = data(f + seg - 1, c);
                    } else {
                        for (Index i = 0; i < seg; ++i) data(f + i, c) = level;  // exact hold
                    }
                    moving = !moving;
                    f += seg;
                }
            }
            break;
        }
        case SynthKind::Mixture: {
            const Matrix a = synth_channels(SynthKind::SineWalk, frames, channels, rng, fps);
            const Matrix b = synth_channels(SynthKind::StopStart, frames, channels, rng, fps);
            const Matrix c = synth_channels(SynthKind::Chirp, frames, channels, rng, fps);
            const double wa = rng.uniform(), wb = rng.uniform() * (1.0 - wa);
            data = wa * a + wb * b + (1.0 - wa - wb) * c;
            break;
        }
    }
    return data;
}

}  // namespace

MotionSequence synth_motion(SynthKind kind, Index frames, Index joints, Rng& rng, double fps) {
    require(frames >= 8, "synth_motion: frames must be >= 8");
    require(joints >= 1, "synth_motion: joints must be >= 1");
    return make_motion(synth_channels(kind, frames, 3 * joints, rng, fps), fps);
}

void save_motion(const std::string& path, const MotionSequence& motion) {
    if (has_suffix(path, ".csv")) {
        save_motion_csv(path, motion);
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_motion: cannot open for writing: " + path);
    os.write("WMOT", 4);
    write_pod<std::uint8_t>(os, 1);
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(motion.data.rows()));
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(motion.joints));
    write_pod<float>(os, static_cast<float>(motion.fps));
    for (Index r = 0; r < motion.data.rows(); ++r)
        for (Index c = 0; c < motion.data.cols(); ++c) write_pod<double>(os, motion.data(r, c));
    if (!os) throw std::runtime_error("save_motion: write failed: " + path);
}

MotionSequence load_motion(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_motion: cannot open: " + path);
    char magic[4] = {};
    is.read(magic, 4);
    if (is && std::string(magic, 4) == "WMOT") {
        std::uint8_t version;
        std::uint32_t frames, joints;
        float fps;
        if (!read_pod(is, version) || version != 1)
            throw std::runtime_error("load_motion: unsupported version in " + path);
        if (!read_pod(is, frames) || !read_pod(is, joints) || !read_pod(is, fps))
            throw std::runtime_error("load_motion: truncated header in " + path);
        Matrix data(static_cast<Index>(frames), static_cast<Index>(3 * joints));
        for (Index r = 0; r < data.rows(); ++r)
            for (Index c = 0; c < data.cols(); ++c) {
                double v;
                if (!read_pod(is, v))
                    throw std::runtime_error("load_motion: unexpected end of file at frame " +
                                             std::to_string(r) + " in " + path);
                data(r, c) = v;
            }
        if (!data.allFinite())
            throw std::runtime_error("load_motion: NaN/Inf entries in " + path);
        MotionSequence m = make_motion(std::move(data), static_cast<double>(fps));
        return m;
    }
    return load_motion_csv(path);
}

void save_manifold(const std::string& path, const WaveletManifold& manifold, double fps) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_manifold: cannot open for writing: " + path);
    os.write("WMAN", 4);
    write_pod<std::uint8_t>(os, 1);
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(manifold.data.rows()));
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(manifold.data.cols()));
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(manifold.original_shape.first));
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(manifold.original_shape.second));
    write_pod<float>(os, static_cast<float>(fps));
    write_pod<std::uint8_t>(os, static_cast<std::uint8_t>(manifold.basis_name.size()));
    os.write(manifold.basis_name.data(), static_cast<std::streamsize>(manifold.basis_name.size()));
    for (Index r = 0; r < manifold.data.rows(); ++r)
        for (Index c = 0; c < manifold.data.cols(); ++c) write_pod<double>(os, manifold.data(r, c));
    if (!os) throw std::runtime_error("save_manifold: write failed: " + path);
}

std::pair<WaveletManifold, double> load_manifold(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_manifold: cannot open: " + path);
    char magic[4] = {};
    is.read(magic, 4);
    if (!is || std::string(magic, 4) != "WMAN")
        throw std::runtime_error("load_manifold: bad magic in " + path);
    std::uint8_t version;
    if (!read_pod(is, version) || version != 1)
        throw std::runtime_error("load_manifold: unsupported version in " + path);
    std::uint32_t rows, cols, orows, ocols;
    float fps;
    std::uint8_t blen;
    if (!read_pod(is, rows) || !read_pod(is, cols) || !read_pod(is, orows) ||
        !read_pod(is, ocols) || !read_pod(is, fps) || !read_pod(is, blen))
        throw std::runtime_error("load_manifold: truncated header in " + path);
    std::string basis(blen, '\0');
    is.read(basis.data(), blen);
    if (!is) throw std::runtime_error("load_manifold: truncated basis name in " + path);
    WaveletManifold m;
    m.basis_name = basis;
    m.original_shape = {static_cast<Index>(orows), static_cast<Index>(ocols)};
    m.data.resize(static_cast<Index>(rows), static_cast<Index>(cols));
    for (Index r = 0; r < m.data.rows(); ++r)
        for (Index c = 0; c < m.data.cols(); ++c) {
            double v;
            if (!read_pod(is, v))
                throw std::runtime_error("load_manifold: unexpected end of file at row " +
                                         std::to_string(r) + " in " + path);
            m.data(r, c) = v;
        }
    return {std::move(m), static_cast<double>(fps)};
}

MotionDataset make_windows(std::vector<MotionSequence> sequences, Index history_frames,
                           Index future_frames, Index stride) {
    require(history_frames >= 1 && future_frames >= 1, "make_windows: H and F must be >= 1");
    require(stride >= 1, "make_windows: stride must be >= 1");
    MotionDataset ds;
    ds.history_frames = history_frames;
    ds.future_frames = future_frames;
    const Index total = history_frames + future_frames;
    for (const MotionSequence& seq : sequences) {
        const Index len = seq.data.rows();
        if (len < total) {
            ++ds.skipped_sequences;
            continue;
        }
        for (Index start = 0; start + total <= len; start += stride) {
            Window w;
            w.history = seq.data.middleRows(start, history_frames);
            w.future = seq.data.middleRows(start + history_frames, future_frames);
            ds.windows.push_back(std::move(w));
        }
    }
    ds.sequences = std::move(sequences);
    return ds;
}

}  // namespace wavemotion
