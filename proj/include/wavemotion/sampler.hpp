// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WaveMotion Project Contributors

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "wavemotion/denoiser.hpp"
#include "wavemotion/manifold.hpp"
#include "wavemotion/rng.hpp"
#include "wavemotion/schedule.hpp"
#include "wavemotion/types.hpp"

namespace wavemotion {

/// Sampler knobs. Defaults follow the reference configuration: 100 DDIM steps
/// over the 1000-step schedule, attention guidance scale s = 1.0 with noise
/// sigma = 2.5 in the first 90 steps, per-step manifold projection on, and
/// pure-conditional guidance (w = 1 in the eps_tilde + w (eps_cond - eps_tilde)
/// parameterization).
struct SampleConfig {
    int ddim_steps = 100;
    double w = 1.0;            // classifier-free guidance scale
    double s = 1.0;            // attention-guidance scale
    double sigma = 2.5;        // attention-guidance noise scale
    double phi_quantile = 0.8; // threshold quantile on the importance vector
    int m = 3;                 // neighbor-frame mask width, odd
    int tabg_window = 90;      // attention guidance in the first N denoising steps
    bool wmsg_enabled = true;  // per-step wavelet-manifold projection
    int control_window = 90;   // masked blending in the first N denoising steps
    double x0_clip = 20.0;     // clamp on the per-step x0 estimate; 0 disables
    int t_start = 0;           // truncated warm start from the history prior; 0 = full T
    std::uint64_t seed = 0;
};

inline void validate(const SampleConfig& c) {
    require(c.ddim_steps >= 1, "sample config: ddim_steps must be >= 1");
    require(c.m >= 1 && c.m % 2 == 1, "sample config: m must be odd and >= 1");
    require(c.sigma >= 0.0, "sample config: sigma must be >= 0");
    require(c.phi_quantile > 0.0 && c.phi_quantile < 1.0,
            "sample config: phi_quantile must be in (0,1)");
    require(c.x0_clip >= 0.0, "sample config: x0_clip must be >= 0");
    require(c.t_start >= 0, "sample config: t_start must be >= 0");
}

/// Evenly spaced DDIM subsequence of {1..T}, ascending, always ending at T.
inline std::vector<int> ddim_timesteps(int total_steps, int ddim_steps) {
    require(ddim_steps >= 1 && ddim_steps <= total_steps,
            "ddim_timesteps: need 1 <= ddim_steps <= schedule steps");
    std::vector<int> taus(ddim_steps);
    for (int i = 1; i <= ddim_steps; ++i)
        taus[i - 1] = static_cast<int>((static_cast<std::int64_t>(i) * total_steps) / ddim_steps);
    return taus;
}

/// Noised intermediate reconstruction:
/// (y_t - sqrt(1 - abar_t) eps + sigma z) / sqrt(abar_t).
inline Matrix estimate_x0(const Matrix& y_t, const Matrix& eps, int t,
                          const NoiseSchedule& schedule, double sigma, const Matrix& z) {
    require(eps.rows() == y_t.rows() && eps.cols() == y_t.cols(),
            "estimate_x0: eps shape mismatch");
    require(z.rows() == y_t.rows() && z.cols() == y_t.cols(), "estimate_x0: z shape mismatch");
    const double abar = schedule.alpha_bar_at(t);
    return (y_t - std::sqrt(1.0 - abar) * eps + sigma * z) / std::sqrt(abar);
}

/// Mean attention map over recorded layers, summed along the first dimension:
/// the relative importance of each wavelet time step.
inline Vector aggregate_attention(const AttentionRecord& attn) {
    require(!attn.per_layer.empty(), "aggregate_attention: empty record");
    Matrix mean = attn.per_layer.front();
    for (std::size_t i = 1; i < attn.per_layer.size(); ++i) mean += attn.per_layer[i];
    mean /= static_cast<double>(attn.per_layer.size());
    return mean.colwise().sum().transpose();
}

/// Linear-interpolation quantile of a vector (q in (0,1)).
inline double quantile(const Vector& v, double q) {
    require(v.size() >= 1, "quantile: empty vector");
    std::vector<double> sorted(v.data(), v.data() + v.size());
    std::sort(sorted.begin(), sorted.end());
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

/// Binary K x cols mask: rows within (m-1)/2 of any i with importance[i] > phi
/// are fully set (window clamped at the boundaries).
inline Matrix build_attention_mask(const Vector& importance, double phi, int m, Index seq_len,
                                   Index cols) {
    require(m >= 1 && m % 2 == 1, "build_attention_mask: m must be odd");
    require(importance.size() == seq_len, "build_attention_mask: importance length mismatch");
    Matrix mask = Matrix::Zero(seq_len, cols);
    const Index half = (m - 1) / 2;
    for (Index i = 0; i < seq_len; ++i) {
        if (importance(i) > phi) {
            const Index lo = std::max<Index>(0, i - half);
            const Index hi = std::min<Index>(seq_len - 1, i + half);
            mask.middleRows(lo, hi - lo + 1).setOnes();
        }
    }
    return mask;
}

/// eps_tilde + w (eps_cond - eps_tilde). The w = 1 endpoint returns the
/// conditional branch itself rather than reassembling it through roundoff.
inline Matrix cfg_combine(const Matrix& eps_tilde, const Matrix& eps_cond, double w) {
    require(eps_tilde.rows() == eps_cond.rows() && eps_tilde.cols() == eps_cond.cols(),
            "cfg_combine: shape mismatch");
    if (w == 1.0) return eps_cond;
    return eps_tilde + w * (eps_cond - eps_tilde);
}

/// Attention-guided unconditional noise: blend the perturbed estimate into the
/// masked rows, re-run the model unconditionally on the blend, steer by s.
template <typename Model>
Matrix tabg_epsilon(const Model& model, const Matrix& y_t, int t, const Matrix& eps_uncond,
                    const Matrix& mask, const Matrix& y_tilde_t, double s) {
    require(mask.rows() == y_t.rows() && mask.cols() == y_t.cols() &&
                y_tilde_t.rows() == y_t.rows() && y_tilde_t.cols() == y_t.cols() &&
                eps_uncond.rows() == y_t.rows() && eps_uncond.cols() == y_t.cols(),
            "tabg_epsilon: shape mismatch");
    const Matrix y_hat =
        ((1.0 - mask.array()) * y_t.array() + mask.array() * y_tilde_t.array()).matrix();
    const Matrix eps_hat = model.forward(y_hat, t, nullptr).eps;
    return eps_uncond + s * (eps_hat - eps_uncond);
}

/// Projection of a manifold-shaped tensor onto the range of the transform:
/// decode to motion space, re-encode. Fixes exact manifolds; idempotent.
inline Matrix wmsg(const Matrix& y, const WaveletBasis& basis,
                   std::pair<Index, Index> original_shape) {
    const Matrix motion = decode_matrix(y, original_shape, basis);
    return encode(motion, basis).data;
}

namespace detail {

template <typename Model>
struct SampleRun {
    const Model& model;
    PipelineInfo info;
    WaveletBasis basis;
    const NoiseSchedule& schedule;
    const SampleConfig& config;
    std::vector<int> taus;
    Matrix cond;  // encoded padded history

    SampleRun(const Model& m, const Eigen::Ref<const Matrix>& history,
              const NoiseSchedule& sched, const SampleConfig& cfg)
        : model(m), info(m.info()), basis(make_basis(info.basis_name)), schedule(sched),
          config(cfg) {
        validate(config);
        require(schedule.steps == info.schedule_steps,
                "sample: schedule length differs from the one the model was trained with");
        require(history.rows() == info.frames_history && history.cols() == info.channels,
                "sample: history shape mismatch (expected " +
                    std::to_string(info.frames_history) + "x" + std::to_string(info.channels) +
                    ")");
        taus = ddim_timesteps(schedule.steps, config.ddim_steps);
        if (config.t_start > 0) {
            require(config.t_start <= schedule.steps,
                    "sample: t_start beyond the schedule");
            while (taus.size() > 1 && taus[taus.size() - 1] > config.t_start) taus.pop_back();
        }
        const Matrix padded =
            pad_history(normalize(history, info.stats), info.frames_total);
        cond = encode(padded, basis).data;
        require(cond.rows() == info.seq_len && cond.cols() == info.feature_dim,
                "sample: model was built for a different manifold shape");
    }

    // Initial latent: pure noise for a full-length pass; for a truncated pass,
    // the forward marginal of the history prior at the start level.
    Matrix init_latent(Rng& rng) const {
        Matrix z = rng.normal_matrix(info.seq_len, info.feature_dim);
        if (config.t_start <= 0) return z;
        const double abar = schedule.alpha_bar_at(taus.back());
        return std::sqrt(abar) * cond + std::sqrt(1.0 - abar) * z;
    }

    // One guided denoising step: y at level t -> level t_prev. denoise_index
    // counts completed steps from the start of the reverse pass (0-based).
    Matrix step(const Matrix& y, int t, int t_prev, int denoise_index, Rng& rng) const {
        auto uncond = model.forward(y, t, nullptr);
        Matrix eps_tilde;
        const bool tabg_active = (config.s != 0.0 || config.sigma != 0.0) &&
                                 denoise_index < config.tabg_window;
        if (tabg_active) {
            const Vector importance = aggregate_attention(uncond.attn);
            const double phi = quantile(importance, config.phi_quantile);
            const Matrix mask =
                build_attention_mask(importance, phi, config.m, y.rows(), y.cols());
            const Matrix z = rng.normal_matrix(y.rows(), y.cols());
            const Matrix y0_tilde = estimate_x0(y, uncond.eps, t, schedule, config.sigma, z);
            const double abar = schedule.alpha_bar_at(t);
            const Matrix y_tilde_t =
                std::sqrt(abar) * y0_tilde + std::sqrt(1.0 - abar) * z;
            eps_tilde = tabg_epsilon(model, y, t, uncond.eps, mask, y_tilde_t, config.s);
        } else {
            eps_tilde = uncond.eps;
        }
        Matrix eps_hat;
        if (config.w == 0.0) {
            eps_hat = std::move(eps_tilde);
        } else {
            const Matrix eps_cond = model.forward(y, t, &cond).eps;
            eps_hat = cfg_combine(eps_tilde, eps_cond, config.w);
        }
        const double abar_t = schedule.alpha_bar_at(t);
        const double abar_prev = schedule.alpha_bar_at(t_prev);
        Matrix y0_pred = (y - std::sqrt(1.0 - abar_t) * eps_hat) / std::sqrt(abar_t);
        // near t = T the 1/sqrt(abar) factor amplifies prediction error by
        // orders of magnitude; the clamp keeps the estimate in data range
        if (config.x0_clip > 0.0)
            y0_pred = y0_pred.cwiseMax(-config.x0_clip).cwiseMin(config.x0_clip);
        Matrix y_next = std::sqrt(abar_prev) * y0_pred + std::sqrt(1.0 - abar_prev) * eps_hat;
        if (!y_next.allFinite())
            throw std::runtime_error("sample: non-finite latent at t=" + std::to_string(t));
        return y_next;
    }

    MotionSequence finish(const Matrix& motion_normalized,
                          const Eigen::Ref<const Matrix>& history) const {
        Matrix motion = denormalize(motion_normalized, info.stats);
        motion.topRows(info.frames_history) = history;  // score only predicted frames
        MotionSequence out = make_motion(std::move(motion), info.fps);
        return out;
    }
};

}  // namespace detail

/// Full guided reverse pass. RNG draw order (documented contract):
/// init y_T row-major, then per denoising step the attention-guidance z
/// (row-major) when that branch is active. Deterministic for a fixed rng.
template <typename Model>
MotionSequence sample(const Model& model, const Eigen::Ref<const Matrix>& history,
                      const NoiseSchedule& schedule, const SampleConfig& config, Rng& rng) {
    detail::SampleRun<Model> run(model, history, schedule, config);
    Matrix y = run.init_latent(rng);
    const auto& taus = run.taus;
    for (int i = static_cast<int>(taus.size()) - 1; i >= 0; --i) {
        const int t = taus[i];
        const int t_prev = i > 0 ? taus[i - 1] : 0;
        const int denoise_index = static_cast<int>(taus.size()) - 1 - i;
        y = run.step(y, t, t_prev, denoise_index, rng);
        if (config.wmsg_enabled)
            y = wmsg(y, run.basis, {run.info.frames_total, run.info.channels});
    }
    const Matrix motion = decode_matrix(y, {run.info.frames_total, run.info.channels}, run.basis);
    return run.finish(motion, history);
}

/// Like sample(), but inside the per-step manifold projection the decoded
/// motion is blended with a noised ground truth under a binary motion-space
/// mask, for the first control_window denoising steps. The ground truth is
/// noised to the destination level t_prev (so the final blend inserts it
/// clean). Extra draws, in order after the attention-guidance z: the
/// ground-truth noising z (row-major), drawn only while blending is active.
/// An all-zero mask consumes no extra draws and reproduces sample() exactly.
template <typename Model>
MotionSequence controlled_sample(const Model& model, const Eigen::Ref<const Matrix>& history,
                                 const Eigen::Ref<const Matrix>& gt_motion,
                                 const Eigen::Ref<const Matrix>& mask,
                                 const NoiseSchedule& schedule, const SampleConfig& config,
                                 Rng& rng) {
    detail::SampleRun<Model> run(model, history, schedule, config);
    require(gt_motion.rows() == run.info.frames_total && gt_motion.cols() == run.info.channels,
            "controlled_sample: gt_motion must be a full-length sequence");
    require(mask.rows() == run.info.frames_total && mask.cols() == run.info.channels,
            "controlled_sample: mask shape mismatch");
    require(((mask.array() == 0.0) || (mask.array() == 1.0)).all(),
            "controlled_sample: mask entries must be 0 or 1");
    const bool mask_empty = (mask.array() == 0.0).all();

    const Matrix gt_norm = normalize(gt_motion, run.info.stats);
    const Matrix y_gt0 = encode(gt_norm, run.basis).data;
    const std::pair<Index, Index> shape{run.info.frames_total, run.info.channels};

    Matrix y = run.init_latent(rng);
    const auto& taus = run.taus;
    Matrix final_motion_normalized;
    bool finished_in_motion_space = false;
    for (int i = static_cast<int>(taus.size()) - 1; i >= 0; --i) {
        const int t = taus[i];
        const int t_prev = i > 0 ? taus[i - 1] : 0;
        const int denoise_index = static_cast<int>(taus.size()) - 1 - i;
        y = run.step(y, t, t_prev, denoise_index, rng);
        const bool blend = !mask_empty && denoise_index < config.control_window;
        if (blend) {
            const Matrix z = rng.normal_matrix(run.info.seq_len, run.info.feature_dim);
            const double abar_prev = schedule.alpha_bar_at(t_prev);
            const Matrix y_gt_noised =
                std::sqrt(abar_prev) * y_gt0 + std::sqrt(1.0 - abar_prev) * z;
            const Matrix x_pred = decode_matrix(y, shape, run.basis);
            const Matrix x_gt = decode_matrix(y_gt_noised, shape, run.basis);
            Matrix x_blend = x_pred;
            for (Index r = 0; r < x_blend.rows(); ++r)
                for (Index c2 = 0; c2 < x_blend.cols(); ++c2)
                    if (mask(r, c2) != 0.0) x_blend(r, c2) = x_gt(r, c2);
            if (i == 0) {
                // the trailing encode/decode pair cancels; return the blend
                final_motion_normalized = x_blend;
                finished_in_motion_space = true;
            } else {
                y = encode(x_blend, run.basis).data;
            }
        } else if (config.wmsg_enabled) {
            y = wmsg(y, run.basis, shape);
        }
    }
    if (!finished_in_motion_space)
        final_motion_normalized = decode_matrix(y, shape, run.basis);
    return run.finish(final_motion_normalized, history);
}

}  // namespace wavemotion
