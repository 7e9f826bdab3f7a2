// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WaveMotion Project Contributors

#pragma once

#include <cmath>
#include <string>

#include "wavemotion/types.hpp"

namespace wavemotion {

enum class ScheduleKind { Cosine, Linear, Sigmoid };

inline ScheduleKind schedule_kind_from_string(const std::string& s) {
    if (s == "cosine") return ScheduleKind::Cosine;
    if (s == "linear") return ScheduleKind::Linear;
    if (s == "sigmoid") return ScheduleKind::Sigmoid;
    throw std::invalid_argument("unknown schedule kind \"" + s +
                                "\"; supported: cosine linear sigmoid");
}

inline std::string to_string(ScheduleKind k) {
    switch (k) {
        case ScheduleKind::Cosine: return "cosine";
        case ScheduleKind::Linear: return "linear";
        case ScheduleKind::Sigmoid: return "sigmoid";
    }
    return "?";
}

/// Steps are addressed 1..steps externally; the arrays are 0-based, so
/// alpha(t) == alpha[t-1]. alpha_bar is the literal running product of alpha,
/// which is what makes alpha_bar[t] = alpha_bar[t-1] * alpha[t] hold exactly.
struct NoiseSchedule {
    ScheduleKind kind = ScheduleKind::Cosine;
    int steps = 0;
    Vector alpha;
    Vector alpha_bar;

    // t in [0, steps]; t = 0 is the no-noise boundary with alpha_bar = 1
    double alpha_bar_at(int t) const {
        require(t >= 0 && t <= steps, "schedule: step index out of range");
        return t == 0 ? 1.0 : alpha_bar(t - 1);
    }
};

inline NoiseSchedule build_schedule(ScheduleKind kind, int steps) {
    require(steps >= 1, "build_schedule: steps must be >= 1");
    NoiseSchedule s;
    s.kind = kind;
    s.steps = steps;
    s.alpha.resize(steps);
    const double t_total = static_cast<double>(steps);
    switch (kind) {
        case ScheduleKind::Cosine: {
            // abar(u) ~ cos^2(((u + 0.008)/1.008) * pi/2), alpha clipped to [0.001, 0.999]
            auto f = [](double u) {
                const double c = std::cos((u + 0.008) / 1.008 * M_PI / 2.0);
                return c * c;
            };
            double prev = f(0.0);
            for (int t = 1; t <= steps; ++t) {
                const double cur = f(static_cast<double>(t) / t_total);
                s.alpha(t - 1) = std::clamp(cur / prev, 0.001, 0.999);
                prev = cur;
            }
            break;
        }
        case ScheduleKind::Linear: {
            for (int t = 0; t < steps; ++t) {
                const double frac = steps == 1 ? 0.0 : static_cast<double>(t) / (t_total - 1.0);
                s.alpha(t) = 1.0 - (1e-4 + frac * (2e-2 - 1e-4));
            }
            break;
        }
        case ScheduleKind::Sigmoid: {
            for (int t = 0; t < steps; ++t) {
                const double frac = steps == 1 ? 0.0 : static_cast<double>(t) / (t_total - 1.0);
                const double logit = -6.0 + 12.0 * frac;
                const double beta = 1e-4 + (2e-2 - 1e-4) / (1.0 + std::exp(-logit));
                s.alpha(t) = 1.0 - beta;
            }
            break;
        }
    }
    s.alpha_bar.resize(steps);
    double running = 1.0;
    for (int t = 0; t < steps; ++t) {
        running *= s.alpha(t);
        s.alpha_bar(t) = running;
    }
    return s;
}

/// Closed-form forward marginal: sqrt(abar_t) y0 + sqrt(1 - abar_t) noise.
inline Matrix q_sample(const Matrix& y0, int t, const Matrix& noise,
                       const NoiseSchedule& schedule) {
    require(t >= 1 && t <= schedule.steps, "q_sample: step index out of range");
    require(noise.rows() == y0.rows() && noise.cols() == y0.cols(),
            "q_sample: noise shape mismatch");
    const double abar = schedule.alpha_bar_at(t);
    return std::sqrt(abar) * y0 + std::sqrt(1.0 - abar) * noise;
}

}  // namespace wavemotion
