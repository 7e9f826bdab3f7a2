// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WaveMotion Project Contributors

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <string>
#include <type_traits>
#include <vector>

#include "wavemotion/manifold.hpp"
#include "wavemotion/rng.hpp"
#include "wavemotion/schedule.hpp"
#include "wavemotion/types.hpp"

namespace wavemotion {

struct DenoiserConfig {
    int blocks = 4;
    int latent_dim = 64;
    int heads = 4;
    int feature_dim = 0;  // 4D, manifold feature width
    int seq_len = 0;      // K, manifold rows
    double cond_drop_prob = 0.1;
};

/// Head-averaged K x K attention maps of the recorded blocks. Rows are
/// softmax distributions (sum to 1).
struct AttentionRecord {
    std::vector<Matrix> per_layer;
};

struct ForwardResult {
    Matrix eps;
    AttentionRecord attn;
};

/// Metadata a sampler needs to run the full pipeline around a noise model.
struct PipelineInfo {
    std::string basis_name;
    int frames_history = 0;
    int frames_total = 0;
    int channels = 0;
    int seq_len = 0;
    int feature_dim = 0;
    int schedule_steps = 0;
    double fps = 25.0;
    ChannelStats stats;
};

struct TrainParams {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    double weight_decay = 1e-4;
    double clip_norm = 1.0;
    double ema_decay = 0.999;
};

struct TrainItem {
    Matrix y0;    // clean manifold, K x 4D
    Matrix cond;  // padded-history manifold, K x 4D
};

/// Noise-prediction network over wavelet manifolds: B blocks of temporal
/// multi-head self-attention followed by a position-wise linear feature mix,
/// each with residual + layer norm. Timestep enters as a projected sinusoidal
/// embedding, the condition as a linear projection of its manifold (or a
/// learned null token when dropped). Parameters live in one flat vector in
/// the declaration order documented in the README, which is also the
/// checkpoint order.
template <typename Scalar>
class Denoiser {
public:
    using Mat = MatrixX<Scalar>;
    using Vec = VectorX<Scalar>;

    DenoiserConfig config;
    // pipeline metadata persisted with checkpoints
    std::string basis_name = "bior2.8";
    int frames_history = 0;
    int frames_total = 0;
    int channels = 0;
    ScheduleKind schedule_kind = ScheduleKind::Cosine;
    int schedule_steps = 1000;
    double fps = 25.0;
    ChannelStats norm_stats;

    Vec params;
    Vec ema;
    TrainParams train;
    std::uint64_t global_step = 0;

    Denoiser() = default;

    Denoiser(DenoiserConfig cfg, std::uint64_t init_seed) : config(cfg) {
        const int latent = config.latent_dim;
        require(config.blocks >= 1 && latent >= 1 && config.heads >= 1 &&
                    config.feature_dim >= 1 && config.seq_len >= 1,
                "denoiser: all dimensions must be >= 1");
        require(latent % config.heads == 0, "denoiser: latent_dim must divide by heads");
        require(latent % 2 == 0, "denoiser: latent_dim must be even");
        require(config.cond_drop_prob >= 0.0 && config.cond_drop_prob <= 1.0,
                "denoiser: cond_drop_prob must be in [0,1]");
        params = Vec::Zero(param_count());
        init_weights(init_seed);
        ema = params;
        adam_m_ = Vec::Zero(params.size());
        adam_v_ = Vec::Zero(params.size());
    }

    // ---- flat parameter layout -------------------------------------------
    // prefix: w_in(F,L) b_in(L) w_time(L,L) b_time(L) w_cond(F,L) b_cond(L) null(L)
    // per block: wq(L,L) bq(L) wk(L,L) bk(L) wv(L,L) bv(L) wo(L,L) bo(L)
    //            ln1_g(L) ln1_b(L) w_mix(L,L) b_mix(L) ln2_g(L) ln2_b(L)
    // tail: w_out(L,F) b_out(F)
    // Matrices are column-major inside the flat vector.

    Index param_count() const {
        const Index l = config.latent_dim, f = config.feature_dim;
        return prefix_size() + config.blocks * block_size() + l * f + f;
    }

    PipelineInfo info() const {
        PipelineInfo p;
        p.basis_name = basis_name;
        p.frames_history = frames_history;
        p.frames_total = frames_total;
        p.channels = channels;
        p.seq_len = config.seq_len;
        p.feature_dim = config.feature_dim;
        p.schedule_steps = schedule_steps;
        p.fps = fps;
        p.stats = norm_stats;
        return p;
    }

    /// Inference snapshot carrying the EMA weights.
    Denoiser ema_model() const {
        Denoiser copy = *this;
        copy.params = ema;
        return copy;
    }

    /// Deterministic function of (params, y_t, t, cond). Returns predicted
    /// noise plus the head-averaged attention of the two middle blocks.
    ForwardResult forward(const Matrix& y_t, int t, const Matrix* cond = nullptr) const {
        Cache cache;
        run_forward(y_t, t, cond, cache);
        ForwardResult out;
        out.eps = cache.out.template cast<double>();
        for (int b : recorded_blocks()) {
            Matrix avg = Matrix::Zero(config.seq_len, config.seq_len);
            for (const Mat& a : cache.blocks[b].attn) avg += a.template cast<double>();
            out.attn.per_layer.push_back(avg / static_cast<double>(config.heads));
        }
        return out;
    }

    /// Noise-prediction loss for one (y0, cond) pair at a given step, together
    /// with parameter gradients (accumulated into grads, scaled by weight).
    double loss_and_grad(const Matrix& y_t, int t, const Matrix* cond, const Matrix& target,
                         Vec* grads, double weight = 1.0) const {
        Cache cache;
        run_forward(y_t, t, cond, cache);
        const Mat tgt = target.template cast<Scalar>();
        const Mat diff = cache.out - tgt;
        const double numel = static_cast<double>(diff.size());
        const double loss = static_cast<double>(diff.squaredNorm()) / numel;
        if (grads) {
            Mat dout = diff * static_cast<Scalar>(2.0 * weight / numel);
            run_backward(cache, dout, *grads);
        }
        return loss;
    }

    double loss_only(const Matrix& y_t, int t, const Matrix* cond, const Matrix& target) const {
        return loss_and_grad(y_t, t, cond, target, nullptr);
    }

    void apply_gradients(Vec& grads) {
        const double norm = std::sqrt(static_cast<double>(grads.squaredNorm()));
        if (train.clip_norm > 0 && norm > train.clip_norm)
            grads *= static_cast<Scalar>(train.clip_norm / norm);
        ++adam_step_;
        const double bc1 = 1.0 - std::pow(train.beta1, static_cast<double>(adam_step_));
        const double bc2 = 1.0 - std::pow(train.beta2, static_cast<double>(adam_step_));
        const Scalar b1 = static_cast<Scalar>(train.beta1), b2 = static_cast<Scalar>(train.beta2);
        adam_m_ = b1 * adam_m_ + (Scalar(1) - b1) * grads;
        adam_v_ = (b2 * adam_v_.array() + (Scalar(1) - b2) * grads.array().square()).matrix();
        const double lr = train.lr;
        for (Index i = 0; i < params.size(); ++i) {
            const double mhat = static_cast<double>(adam_m_(i)) / bc1;
            const double vhat = static_cast<double>(adam_v_(i)) / bc2;
            const double step = lr * (mhat / (std::sqrt(vhat) + train.adam_eps) +
                                      train.weight_decay * static_cast<double>(params(i)));
            params(i) -= static_cast<Scalar>(step);
        }
        const Scalar d = static_cast<Scalar>(train.ema_decay);
        ema = d * ema + (Scalar(1) - d) * params;
        ++global_step;
    }

    // named views over an arbitrary flat store (params, grads, ema)
    Eigen::Map<Mat> w_in(Vec& s) const { return mat(s, off_w_in(), fdim(), ldim()); }
    Eigen::Map<Mat> w_time(Vec& s) const { return mat(s, off_w_time(), ldim(), ldim()); }
    Eigen::Map<Mat> w_cond(Vec& s) const { return mat(s, off_w_cond(), fdim(), ldim()); }
    Eigen::Map<Vec> b_in(Vec& s) const { return vec(s, off_w_in() + fdim() * ldim(), ldim()); }
    Eigen::Map<Vec> b_time(Vec& s) const { return vec(s, off_w_time() + ldim() * ldim(), ldim()); }
    Eigen::Map<Vec> b_cond(Vec& s) const { return vec(s, off_w_cond() + fdim() * ldim(), ldim()); }
    Eigen::Map<Vec> null_token(Vec& s) const { return vec(s, off_null(), ldim()); }
    Eigen::Map<Mat> w_out(Vec& s) const { return mat(s, off_tail(), ldim(), fdim()); }
    Eigen::Map<Vec> b_out(Vec& s) const { return vec(s, off_tail() + ldim() * fdim(), fdim()); }

    // per-block tensors, slot in {wq, wk, wv, wo, w_mix}, biases and norms below
    Eigen::Map<Mat> block_w(Vec& s, int b, int slot) const {
        return mat(s, block_off(b) + slot * (ldim() * ldim() + ldim()), ldim(), ldim());
    }
    Eigen::Map<Vec> block_b(Vec& s, int b, int slot) const {
        return vec(s, block_off(b) + slot * (ldim() * ldim() + ldim()) + ldim() * ldim(), ldim());
    }
    // order inside a block after the 4 attention (w,b) pairs:
    // ln1_g ln1_b, then (w_mix,b_mix) pair, then ln2_g ln2_b
    Eigen::Map<Vec> ln1_g(Vec& s, int b) const { return vec(s, ln_off(b), ldim()); }
    Eigen::Map<Vec> ln1_b(Vec& s, int b) const { return vec(s, ln_off(b) + ldim(), ldim()); }
    Eigen::Map<Mat> w_mix(Vec& s, int b) const { return mat(s, ln_off(b) + 2 * ldim(), ldim(), ldim()); }
    Eigen::Map<Vec> b_mix(Vec& s, int b) const {
        return vec(s, ln_off(b) + 2 * ldim() + ldim() * ldim(), ldim());
    }
    Eigen::Map<Vec> ln2_g(Vec& s, int b) const {
        return vec(s, ln_off(b) + 3 * ldim() + ldim() * ldim(), ldim());
    }
    Eigen::Map<Vec> ln2_b(Vec& s, int b) const {
        return vec(s, ln_off(b) + 4 * ldim() + ldim() * ldim(), ldim());
    }

    std::vector<int> recorded_blocks() const {
        const int b = config.blocks;
        const int first = std::max(0, b / 2 - 1);
        const int second = std::min(b - 1, b / 2);
        if (first == second) return {first};
        return {first, second};
    }

private:
    Vec adam_m_, adam_v_;
    std::int64_t adam_step_ = 0;

    Index ldim() const { return config.latent_dim; }
    Index fdim() const { return config.feature_dim; }
    Index prefix_size() const { return 2 * fdim() * ldim() + ldim() * ldim() + 4 * ldim(); }
    Index block_size() const { return 5 * ldim() * ldim() + 9 * ldim(); }
    Index off_w_in() const { return 0; }
    Index off_w_time() const { return fdim() * ldim() + ldim(); }
    Index off_w_cond() const { return off_w_time() + ldim() * ldim() + ldim(); }
    Index off_null() const { return off_w_cond() + fdim() * ldim() + ldim(); }
    Index block_off(int b) const { return prefix_size() + b * block_size(); }
    Index ln_off(int b) const { return block_off(b) + 4 * (ldim() * ldim() + ldim()); }
    Index off_tail() const { return prefix_size() + config.blocks * block_size(); }

    static Eigen::Map<Mat> mat(Vec& s, Index off, Index r, Index c) {
        return Eigen::Map<Mat>(s.data() + off, r, c);
    }
    static Eigen::Map<Vec> vec(Vec& s, Index off, Index n) {
        return Eigen::Map<Vec>(s.data() + off, n);
    }
    Eigen::Map<const Mat> cmat(Index off, Index r, Index c) const {
        return Eigen::Map<const Mat>(params.data() + off, r, c);
    }
    Eigen::Map<const Vec> cvec(Index off, Index n) const {
        return Eigen::Map<const Vec>(params.data() + off, n);
    }

    void init_weights(std::uint64_t seed) {
        Rng rng(seed);
        auto fill = [&](Eigen::Map<Mat> m, double scale) {
            for (Index c = 0; c < m.cols(); ++c)
                for (Index r = 0; r < m.rows(); ++r)
                    m(r, c) = static_cast<Scalar>(rng.normal() * scale);
        };
        auto xavier = [](Index in, Index out) { return std::sqrt(2.0 / double(in + out)); };
        Vec& p = params;
        fill(w_in(p), xavier(fdim(), ldim()));
        fill(w_time(p), xavier(ldim(), ldim()));
        fill(w_cond(p), xavier(fdim(), ldim()));
        for (Index i = 0; i < ldim(); ++i)
            null_token(p)(i) = static_cast<Scalar>(rng.normal() * 0.02);
        for (int b = 0; b < config.blocks; ++b) {
            for (int slot = 0; slot < 4; ++slot) fill(block_w(p, b, slot), xavier(ldim(), ldim()));
            fill(w_mix(p, b), xavier(ldim(), ldim()));
            ln1_g(p, b).setOnes();
            ln2_g(p, b).setOnes();
        }
        // small output projection keeps the init prediction near zero, so the
        // initial loss sits at the unit-Gaussian baseline
        fill(w_out(p), 0.1 * xavier(ldim(), fdim()));
    }

    struct BlockCache {
        Mat x_in, q, k, v;
        std::vector<Mat> attn;  // per head, K x K
        Mat heads_out;          // pre-output-projection
        Mat r1, x1hat, x1;
        Vec rstd1;
        Mat mix, r2, x2hat;
        Vec rstd2;
    };
    struct Cache {
        Mat y, cond;
        bool cond_used = false;
        Vec temb_sin;
        Mat cemb;
        Mat x0;
        std::vector<BlockCache> blocks;
        Mat x_final;
        Mat out;
    };

    static constexpr double kLnEps = 1e-5;

    Vec sinusoid(int t) const {
        const Index l = ldim();
        Vec e(l);
        for (Index i = 0; i < l / 2; ++i) {
            const double freq = std::exp(-std::log(10000.0) * (2.0 * double(i) / double(l)));
            e(2 * i) = static_cast<Scalar>(std::sin(double(t) * freq));
            e(2 * i + 1) = static_cast<Scalar>(std::cos(double(t) * freq));
        }
        return e;
    }

    void layer_norm(const Mat& x, const Eigen::Map<const Vec>& g, const Eigen::Map<const Vec>& b,
                    Mat& xhat, Vec& rstd, Mat& out) const {
        const Index rows = x.rows(), l = x.cols();
        xhat.resize(rows, l);
        out.resize(rows, l);
        rstd.resize(rows);
        for (Index r = 0; r < rows; ++r) {
            const Scalar mu = x.row(r).mean();
            const Scalar var = (x.row(r).array() - mu).square().mean();
            const Scalar rs = Scalar(1) / std::sqrt(var + static_cast<Scalar>(kLnEps));
            rstd(r) = rs;
            xhat.row(r) = (x.row(r).array() - mu) * rs;
            out.row(r) = xhat.row(r).array() * g.transpose().array() + b.transpose().array();
        }
    }

    void layer_norm_backward(const Mat& dout, const Mat& xhat, const Vec& rstd,
                             const Eigen::Map<const Vec>& g, Eigen::Map<Vec> dg,
                             Eigen::Map<Vec> db, Mat& dx) const {
        const Index rows = dout.rows(), l = dout.cols();
        dx.resize(rows, l);
        for (Index r = 0; r < rows; ++r) {
            dg += (dout.row(r).array() * xhat.row(r).array()).matrix().transpose();
            db += dout.row(r).transpose();
            const Eigen::Array<Scalar, 1, Eigen::Dynamic> u =
                dout.row(r).array() * g.transpose().array();
            const Scalar mean_u = u.mean();
            const Scalar mean_ux = (u * xhat.row(r).array()).mean();
            dx.row(r) = ((u - mean_u - xhat.row(r).array() * mean_ux) * rstd(r)).matrix();
        }
    }

    void run_forward(const Matrix& y_in, int t, const Matrix* cond_in, Cache& c) const {
        require(y_in.rows() == config.seq_len && y_in.cols() == config.feature_dim,
                "denoiser forward: input shape mismatch");
        require(t >= 1 && t <= schedule_steps, "denoiser forward: step out of schedule range");
        if (cond_in)
            require(cond_in->rows() == config.seq_len && cond_in->cols() == config.feature_dim,
                    "denoiser forward: condition shape mismatch");
        const Index kk = config.seq_len, l = ldim(), heads = config.heads, dh = l / heads;
        c.y = y_in.template cast<Scalar>();
        c.cond_used = cond_in != nullptr;
        if (cond_in) c.cond = cond_in->template cast<Scalar>();
        c.temb_sin = sinusoid(t);

        const auto W_in = cmat(off_w_in(), fdim(), l);
        const auto Bi = cvec(off_w_in() + fdim() * l, l);
        const auto W_t = cmat(off_w_time(), l, l);
        const auto Bt = cvec(off_w_time() + l * l, l);
        // condition enters as one embedding, re-injected in front of every
        // block so the pathway survives depth
        if (c.cond_used) {
            const auto W_c = cmat(off_w_cond(), fdim(), l);
            const auto Bc = cvec(off_w_cond() + fdim() * l, l);
            c.cemb = c.cond * W_c;
            c.cemb.rowwise() += Bc.transpose();
        } else {
            c.cemb = Mat::Zero(kk, l);
            c.cemb.rowwise() += cvec(off_null(), l).transpose();
        }
        c.x0 = c.y * W_in;
        Eigen::Matrix<Scalar, 1, Eigen::Dynamic> temb =
            c.temb_sin.transpose() * W_t + Bt.transpose();
        c.x0.rowwise() += Bi.transpose() + temb;
        c.x0 += c.cemb;

        Mat x = c.x0;
        c.blocks.assign(config.blocks, BlockCache{});
        const Scalar scale = static_cast<Scalar>(1.0 / std::sqrt(double(dh)));
        for (int b = 0; b < config.blocks; ++b) {
            BlockCache& bc = c.blocks[b];
            if (b > 0) x += c.cemb;
            bc.x_in = x;
            const auto Wq = cmat(block_off(b) + 0 * (l * l + l), l, l);
            const auto Bq = cvec(block_off(b) + 0 * (l * l + l) + l * l, l);
            const auto Wk = cmat(block_off(b) + 1 * (l * l + l), l, l);
            const auto Bk = cvec(block_off(b) + 1 * (l * l + l) + l * l, l);
            const auto Wv = cmat(block_off(b) + 2 * (l * l + l), l, l);
            const auto Bv = cvec(block_off(b) + 2 * (l * l + l) + l * l, l);
            const auto Wo = cmat(block_off(b) + 3 * (l * l + l), l, l);
            const auto Bo = cvec(block_off(b) + 3 * (l * l + l) + l * l, l);
            bc.q = x * Wq;
            bc.q.rowwise() += Bq.transpose();
            bc.k = x * Wk;
            bc.k.rowwise() += Bk.transpose();
            bc.v = x * Wv;
            bc.v.rowwise() += Bv.transpose();
            bc.heads_out.resize(kk, l);
            bc.attn.resize(heads);
            for (int h = 0; h < heads; ++h) {
                const auto Qh = bc.q.middleCols(h * dh, dh);
                const auto Kh = bc.k.middleCols(h * dh, dh);
                const auto Vh = bc.v.middleCols(h * dh, dh);
                Mat s = Qh * Kh.transpose() * scale;
                Mat& a = bc.attn[h];
                a.resize(kk, kk);
                for (Index r = 0; r < kk; ++r) {
                    const Scalar mx = s.row(r).maxCoeff();
                    a.row(r) = (s.row(r).array() - mx).exp();
                    a.row(r) /= a.row(r).sum();
                }
                bc.heads_out.middleCols(h * dh, dh) = a * Vh;
            }
            Mat attn_proj = bc.heads_out * Wo;
            attn_proj.rowwise() += Bo.transpose();
            bc.r1 = x + attn_proj;
            const auto G1 = cvec(ln_off(b), l);
            const auto B1 = cvec(ln_off(b) + l, l);
            layer_norm(bc.r1, G1, B1, bc.x1hat, bc.rstd1, bc.x1);
            const auto Wm = cmat(ln_off(b) + 2 * l, l, l);
            const auto Bm = cvec(ln_off(b) + 2 * l + l * l, l);
            bc.mix = bc.x1 * Wm;
            bc.mix.rowwise() += Bm.transpose();
            bc.r2 = bc.x1 + bc.mix;
            const auto G2 = cvec(ln_off(b) + 3 * l + l * l, l);
            const auto B2 = cvec(ln_off(b) + 4 * l + l * l, l);
            Mat x2;
            layer_norm(bc.r2, G2, B2, bc.x2hat, bc.rstd2, x2);
            x = std::move(x2);
        }
        c.x_final = std::move(x);
        const auto W_out = cmat(off_tail(), l, fdim());
        const auto B_out = cvec(off_tail() + l * fdim(), fdim());
        c.out = c.x_final * W_out;
        c.out.rowwise() += B_out.transpose();
    }

    void run_backward(const Cache& c, const Mat& dout_in, Vec& grads) const {
        const Index kk = config.seq_len, l = ldim(), heads = config.heads, dh = l / heads;
        Vec& g = grads;
        const auto W_out = cmat(off_tail(), l, fdim());
        w_out(g) += c.x_final.transpose() * dout_in;
        b_out(g) += dout_in.colwise().sum().transpose();
        Mat dx = dout_in * W_out.transpose();

        Mat dcemb = Mat::Zero(kk, l);
        const Scalar scale = static_cast<Scalar>(1.0 / std::sqrt(double(dh)));
        for (int b = config.blocks - 1; b >= 0; --b) {
            const BlockCache& bc = c.blocks[b];
            const auto G2 = cvec(ln_off(b) + 3 * l + l * l, l);
            Mat dr2;
            layer_norm_backward(dx, bc.x2hat, bc.rstd2, G2, ln2_g(g, b), ln2_b(g, b), dr2);
            // r2 = x1 + x1*Wm + bm
            const auto Wm = cmat(ln_off(b) + 2 * l, l, l);
            w_mix(g, b) += bc.x1.transpose() * dr2;
            b_mix(g, b) += dr2.colwise().sum().transpose();
            Mat dx1 = dr2 + dr2 * Wm.transpose();
            const auto G1 = cvec(ln_off(b), l);
            Mat dr1;
            layer_norm_backward(dx1, bc.x1hat, bc.rstd1, G1, ln1_g(g, b), ln1_b(g, b), dr1);
            // r1 = x_in + heads_out*Wo + bo
            const auto Wo = cmat(block_off(b) + 3 * (l * l + l), l, l);
            block_w(g, b, 3) += bc.heads_out.transpose() * dr1;
            block_b(g, b, 3) += dr1.colwise().sum().transpose();
            Mat dheads = dr1 * Wo.transpose();
            Mat dq = Mat::Zero(kk, l), dk = Mat::Zero(kk, l), dv = Mat::Zero(kk, l);
            for (int h = 0; h < heads; ++h) {
                const auto Qh = bc.q.middleCols(h * dh, dh);
                const auto Kh = bc.k.middleCols(h * dh, dh);
                const auto Vh = bc.v.middleCols(h * dh, dh);
                const Mat& a = bc.attn[h];
                const auto dOh = dheads.middleCols(h * dh, dh);
                Mat da = dOh * Vh.transpose();
                dv.middleCols(h * dh, dh) = a.transpose() * dOh;
                Mat ds(kk, kk);
                for (Index r = 0; r < kk; ++r) {
                    const Scalar dot = da.row(r).dot(a.row(r));
                    ds.row(r) = a.row(r).array() * (da.row(r).array() - dot);
                }
                dq.middleCols(h * dh, dh) = ds * Kh * scale;
                dk.middleCols(h * dh, dh) = ds.transpose() * Qh * scale;
            }
            const auto Wq = cmat(block_off(b) + 0 * (l * l + l), l, l);
            const auto Wk = cmat(block_off(b) + 1 * (l * l + l), l, l);
            const auto Wv = cmat(block_off(b) + 2 * (l * l + l), l, l);
            block_w(g, b, 0) += bc.x_in.transpose() * dq;
            block_b(g, b, 0) += dq.colwise().sum().transpose();
            block_w(g, b, 1) += bc.x_in.transpose() * dk;
            block_b(g, b, 1) += dk.colwise().sum().transpose();
            block_w(g, b, 2) += bc.x_in.transpose() * dv;
            block_b(g, b, 2) += dv.colwise().sum().transpose();
            dx = dr1 + dq * Wq.transpose() + dk * Wk.transpose() + dv * Wv.transpose();
            if (b > 0) dcemb += dx;  // per-block condition injection
        }

        // x0 = y*W_in + b_in + temb + cemb
        w_in(g) += c.y.transpose() * dx;
        b_in(g) += dx.colwise().sum().transpose();
        const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> dsum = dx.colwise().sum();
        w_time(g) += c.temb_sin * dsum;
        b_time(g) += dsum.transpose();
        dcemb += dx;
        const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> dcsum = dcemb.colwise().sum();
        if (c.cond_used) {
            w_cond(g) += c.cond.transpose() * dcemb;
            b_cond(g) += dcsum.transpose();
        } else {
            null_token(g) += dcsum.transpose();
        }
    }

};

/// One optimizer update on a batch. Per item the draws are, in order:
/// t ~ U{1..T}, eps ~ N(0,I) (row-major), one uniform for condition dropout.
/// Returns the mean per-element noise-prediction loss.
template <typename Scalar>
double train_step(Denoiser<Scalar>& model, const std::vector<TrainItem>& batch,
                  const NoiseSchedule& schedule, Rng& rng) {
    require(!batch.empty(), "train_step: empty batch");
    using Vec = typename Denoiser<Scalar>::Vec;
    Vec grads = Vec::Zero(model.params.size());
    double loss_sum = 0.0;
    const double weight = 1.0 / static_cast<double>(batch.size());
    for (const TrainItem& item : batch) {
        require(item.y0.rows() == model.config.seq_len &&
                    item.y0.cols() == model.config.feature_dim,
                "train_step: y0 shape mismatch");
        const int t = rng.uniform_int(1, schedule.steps);
        const Matrix eps = rng.normal_matrix(item.y0.rows(), item.y0.cols());
        const bool drop = rng.uniform() < model.config.cond_drop_prob;
        const Matrix y_t = q_sample(item.y0, t, eps, schedule);
        const Matrix* cond = drop ? nullptr : &item.cond;
        loss_sum += model.loss_and_grad(y_t, t, cond, eps, &grads, weight);
    }
    const double loss = loss_sum / static_cast<double>(batch.size());
    if (!std::isfinite(loss))
        throw std::runtime_error(
            "train_step: non-finite loss; lower the learning rate or check input "
            "normalization");
    model.apply_gradients(grads);
    return loss;
}

/// Central finite differences against the analytic gradient of the
/// noise-prediction loss, on every parameter. The target noise is a fixed
/// pseudo-random tensor so the check is deterministic. 64-bit models only.
template <typename Scalar>
double finite_diff_check(Denoiser<Scalar>& model, const Matrix& y_t, int t, const Matrix* cond,
                         double fd_eps = 1e-4) {
    static_assert(std::is_same_v<Scalar, double>,
                  "finite_diff_check requires the 64-bit model");
    const Matrix target = Rng(0x46444348).normal_matrix(y_t.rows(), y_t.cols());
    using Vec = typename Denoiser<Scalar>::Vec;
    Vec grads = Vec::Zero(model.params.size());
    model.loss_and_grad(y_t, t, cond, target, &grads);
    double worst = 0.0;
    for (Index i = 0; i < model.params.size(); ++i) {
        const double saved = model.params(i);
        model.params(i) = saved + fd_eps;
        const double lp = model.loss_only(y_t, t, cond, target);
        model.params(i) = saved - fd_eps;
        const double lm = model.loss_only(y_t, t, cond, target);
        model.params(i) = saved;
        const double g_fd = (lp - lm) / (2.0 * fd_eps);
        const double g_an = grads(i);
        const double denom = std::max({std::abs(g_fd), std::abs(g_an), 1e-6});
        worst = std::max(worst, std::abs(g_fd - g_an) / denom);
    }
    return worst;
}

// ---- checkpoint format -----------------------------------------------------
// magic "WMCK" | u8 version=1
// u32 x10: blocks latent heads feature_dim seq_len frames_history frames_total
//          channels schedule_kind schedule_steps
// f32 cond_drop_prob | f32 fps | u8 basis_len | basis bytes | u64 global_step
// f64 mean[channels] | f64 std[channels]
// u64 param_count | f32 params[param_count] | f32 ema[param_count]
// All integers and floats little-endian; parameters in declaration order.

namespace detail {
static_assert(std::endian::native == std::endian::little,
              "checkpoint io assumes a little-endian host");

template <typename T>
void write_pod(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T read_pod(std::istream& is, const char* what) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error(std::string("checkpoint: truncated while reading ") + what);
    return v;
}
}  // namespace detail

template <typename Scalar>
void save_checkpoint(const Denoiser<Scalar>& model, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("checkpoint: cannot open for writing: " + path);
    os.write("WMCK", 4);
    detail::write_pod<std::uint8_t>(os, 1);
    for (int v : {model.config.blocks, model.config.latent_dim, model.config.heads,
                  model.config.feature_dim, model.config.seq_len, model.frames_history,
                  model.frames_total, model.channels, static_cast<int>(model.schedule_kind),
                  model.schedule_steps})
        detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(v));
    detail::write_pod<float>(os, static_cast<float>(model.config.cond_drop_prob));
    detail::write_pod<float>(os, static_cast<float>(model.fps));
    detail::write_pod<std::uint8_t>(os, static_cast<std::uint8_t>(model.basis_name.size()));
    os.write(model.basis_name.data(), static_cast<std::streamsize>(model.basis_name.size()));
    detail::write_pod<std::uint64_t>(os, model.global_step);
    for (Index i = 0; i < model.channels; ++i)
        detail::write_pod<double>(os, model.norm_stats.mean(i));
    for (Index i = 0; i < model.channels; ++i)
        detail::write_pod<double>(os, model.norm_stats.stdev(i));
    detail::write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(model.params.size()));
    for (Index i = 0; i < model.params.size(); ++i)
        detail::write_pod<float>(os, static_cast<float>(model.params(i)));
    for (Index i = 0; i < model.ema.size(); ++i)
        detail::write_pod<float>(os, static_cast<float>(model.ema(i)));
    if (!os) throw std::runtime_error("checkpoint: write failed: " + path);
}

template <typename Scalar = float>
Denoiser<Scalar> load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint: cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::string(magic, 4) != "WMCK")
        throw std::runtime_error("checkpoint: bad magic (not a WMCK file): " + path);
    const auto version = detail::read_pod<std::uint8_t>(is, "version");
    if (version != 1) throw std::runtime_error("checkpoint: unsupported version");
    std::uint32_t ints[10];
    for (auto& v : ints) v = detail::read_pod<std::uint32_t>(is, "config");
    DenoiserConfig cfg;
    cfg.blocks = static_cast<int>(ints[0]);
    cfg.latent_dim = static_cast<int>(ints[1]);
    cfg.heads = static_cast<int>(ints[2]);
    cfg.feature_dim = static_cast<int>(ints[3]);
    cfg.seq_len = static_cast<int>(ints[4]);
    cfg.cond_drop_prob = detail::read_pod<float>(is, "cond_drop_prob");
    Denoiser<Scalar> model(cfg, 0);
    model.frames_history = static_cast<int>(ints[5]);
    model.frames_total = static_cast<int>(ints[6]);
    model.channels = static_cast<int>(ints[7]);
    model.schedule_kind = static_cast<ScheduleKind>(ints[8]);
    model.schedule_steps = static_cast<int>(ints[9]);
    model.fps = detail::read_pod<float>(is, "fps");
    const auto blen = detail::read_pod<std::uint8_t>(is, "basis name length");
    std::string name(blen, '\0');
    is.read(name.data(), blen);
    if (!is) throw std::runtime_error("checkpoint: truncated while reading basis name");
    model.basis_name = name;
    model.global_step = detail::read_pod<std::uint64_t>(is, "global step");
    model.norm_stats.mean.resize(model.channels);
    model.norm_stats.stdev.resize(model.channels);
    for (Index i = 0; i < model.channels; ++i)
        model.norm_stats.mean(i) = detail::read_pod<double>(is, "norm mean");
    for (Index i = 0; i < model.channels; ++i)
        model.norm_stats.stdev(i) = detail::read_pod<double>(is, "norm std");
    const auto count = detail::read_pod<std::uint64_t>(is, "param count");
    if (count != static_cast<std::uint64_t>(model.param_count()))
        throw std::runtime_error("checkpoint: parameter count does not match config");
    for (Index i = 0; i < model.params.size(); ++i)
        model.params(i) = static_cast<Scalar>(detail::read_pod<float>(is, "params"));
    for (Index i = 0; i < model.ema.size(); ++i)
        model.ema(i) = static_cast<Scalar>(detail::read_pod<float>(is, "ema params"));
    return model;
}

}  // namespace wavemotion
