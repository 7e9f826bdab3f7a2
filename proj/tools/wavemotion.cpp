// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WaveMotion Project Contributors

// Command-line driver: train / predict / eval / encode / decode /
// ablate-bases / ablate-guidance. Configuration comes from a key = value file
// plus repeatable --set overrides; every command is deterministic under a
// fixed seed.

#include <CLI11.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "wavemotion/config.hpp"
#include "wavemotion/data_io.hpp"
#include "wavemotion/denoiser.hpp"
#include "wavemotion/metrics.hpp"
#include "wavemotion/sampler.hpp"

namespace fs = std::filesystem;
using namespace wavemotion;

namespace {

// ---------------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------------

std::vector<MotionSequence> make_corpus(const RunConfig& cfg, std::uint64_t seed) {
    const SynthKind kind = synth_kind_from_string(cfg.get("data.kind"));
    const Index count = cfg.get_int("data.count");
    const Index frames = cfg.get_int("data.frames");
    const Index joints = cfg.get_int("data.joints");
    const double fps = cfg.get_double("data.fps");
    std::vector<MotionSequence> corpus;
    corpus.reserve(count);
    for (Index i = 0; i < count; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        corpus.push_back(synth_motion(kind, frames, joints, rng, fps));
    }
    return corpus;
}

SampleConfig sample_config(const RunConfig& cfg) {
    SampleConfig s;
    s.ddim_steps = cfg.get_int("sample.ddim_steps");
    s.w = cfg.get_double("sample.w");
    s.s = cfg.get_double("sample.s");
    s.sigma = cfg.get_double("sample.sigma");
    s.phi_quantile = cfg.get_double("sample.phi_quantile");
    s.m = cfg.get_int("sample.m");
    s.tabg_window = cfg.get_int("sample.tabg_window");
    s.wmsg_enabled = cfg.get_bool("sample.wmsg");
    s.control_window = cfg.get_int("sample.control_window");
    s.x0_clip = cfg.get_double("sample.x0_clip");
    s.t_start = cfg.get_int("sample.t_start");
    s.seed = cfg.get_u64("sample.seed");
    validate(s);
    return s;
}

NoiseSchedule schedule_for(const Denoiser<float>& model) {
    return build_schedule(model.schedule_kind, model.schedule_steps);
}

Matrix zero_velocity_prediction(const Matrix& history, Index future_frames) {
    Matrix out(future_frames, history.cols());
    out.rowwise() = history.row(history.rows() - 1);
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    return out;
}

// "a..b" inclusive
std::pair<int, int> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos)
        throw std::invalid_argument("frame range must look like first..last: " + text);
    const int a = std::stoi(text.substr(0, dots));
    const int b = std::stoi(text.substr(dots + 2));
    if (b < a) throw std::invalid_argument("empty frame range: " + text);
    return {a, b};
}

void write_svg_curves(const std::string& path, const std::vector<std::string>& names,
                      const std::vector<Vector>& series, const std::string& title) {
    const double width = 720, height = 360, pad = 40;
    double lo = 1e300, hi = -1e300;
    Index frames = 0;
    for (const Vector& s : series) {
        lo = std::min(lo, s.minCoeff());
        hi = std::max(hi, s.maxCoeff());
        frames = std::max(frames, s.size());
    }
    if (hi <= lo) hi = lo + 1.0;
    const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                            "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write svg: " + path);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">"
       << title << "</text>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << height - pad << "\" x2=\"" << width - pad
       << "\" y2=\"" << height - pad << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\""
       << height - pad << "\" stroke=\"black\"/>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        os << "<polyline fill=\"none\" stroke=\"" << colors[k % 8]
           << "\" stroke-width=\"1.5\" points=\"";
        for (Index f = 0; f < series[k].size(); ++f) {
            const double x = pad + (width - 2 * pad) * double(f) / double(frames - 1);
            const double y =
                height - pad - (height - 2 * pad) * (series[k](f) - lo) / (hi - lo);
            os << x << ',' << y << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << width - pad + 4 << "\" y=\"" << pad + 14 * double(k + 1)
           << "\" font-size=\"11\" fill=\"" << colors[k % 8] << "\">" << names[k] << "</text>\n";
    }
    os << "</svg>\n";
}

struct EncodedWindows {
    std::vector<TrainItem> items;
    ChannelStats stats;
    Index seq_len = 0, feature_dim = 0;
};

EncodedWindows encode_windows(const MotionDataset& ds, const WaveletBasis& basis) {
    std::vector<Matrix> full;
    full.reserve(ds.windows.size());
    for (const Window& w : ds.windows) {
        Matrix m(w.history.rows() + w.future.rows(), w.history.cols());
        m << w.history, w.future;
        full.push_back(std::move(m));
    }
    EncodedWindows out;
    out.stats = compute_stats(full);
    const Index total = ds.history_frames + ds.future_frames;
    for (std::size_t i = 0; i < full.size(); ++i) {
        TrainItem item;
        item.y0 = encode(normalize(full[i], out.stats), basis).data;
        item.cond =
            encode(pad_history(normalize(ds.windows[i].history, out.stats), total), basis).data;
        out.items.push_back(std::move(item));
    }
    if (!out.items.empty()) {
        out.seq_len = out.items[0].y0.rows();
        out.feature_dim = out.items[0].y0.cols();
    }
    return out;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

int cmd_train(const RunConfig& cfg, const std::string& resume_path) {
    const fs::path out_dir = cfg.get("out.dir");
    fs::create_directories(out_dir);
    const WaveletBasis basis = make_basis(cfg.get("model.basis"));
    const Index h = cfg.get_int("data.h"), f = cfg.get_int("data.f");
    const MotionDataset ds =
        make_windows(make_corpus(cfg, cfg.get_u64("data.seed")), h, f,
                     cfg.get_int("data.stride"));
    if (ds.windows.empty()) throw std::runtime_error("train: no windows in the corpus");
    if (ds.skipped_sequences > 0)
        std::cout << "warning: skipped " << ds.skipped_sequences
                  << " sequences shorter than H+F\n";
    const EncodedWindows enc = encode_windows(ds, basis);

    const NoiseSchedule sched = build_schedule(
        schedule_kind_from_string(cfg.get("schedule.kind")), cfg.get_int("schedule.steps"));

    Denoiser<float> model;
    if (!resume_path.empty()) {
        model = load_checkpoint<float>(resume_path);
        if (model.config.seq_len != enc.seq_len || model.config.feature_dim != enc.feature_dim)
            throw std::runtime_error("train: checkpoint shape (" +
                                     std::to_string(model.config.seq_len) + "x" +
                                     std::to_string(model.config.feature_dim) +
                                     ") does not match the data (" + std::to_string(enc.seq_len) +
                                     "x" + std::to_string(enc.feature_dim) + ")");
        std::cout << "resuming from step " << model.global_step << "\n";
    } else {
        DenoiserConfig mc;
        mc.blocks = cfg.get_int("model.blocks");
        mc.latent_dim = cfg.get_int("model.latent_dim");
        mc.heads = cfg.get_int("model.heads");
        mc.cond_drop_prob = cfg.get_double("model.cond_drop");
        mc.seq_len = static_cast<int>(enc.seq_len);
        mc.feature_dim = static_cast<int>(enc.feature_dim);
        model = Denoiser<float>(mc, cfg.get_u64("model.seed"));
        model.basis_name = basis.name;
        model.frames_history = static_cast<int>(h);
        model.frames_total = static_cast<int>(h + f);
        model.channels = static_cast<int>(3 * cfg.get_int("data.joints"));
        model.schedule_kind = sched.kind;
        model.schedule_steps = sched.steps;
        model.fps = cfg.get_double("data.fps");
        model.norm_stats = enc.stats;
    }
    model.train.lr = cfg.get_double("model.lr");
    model.train.weight_decay = cfg.get_double("model.weight_decay");
    model.train.ema_decay = cfg.get_double("model.ema");

    const int steps = cfg.get_int("model.train_steps");
    const int batch_size = cfg.get_int("model.batch");
    const fs::path ckpt_path = out_dir / "model.wmck";
    const fs::path loss_path = out_dir / "loss.csv";
    std::ofstream loss_csv(loss_path);
    loss_csv << "step,loss\n";
    Rng rng(cfg.get_u64("model.seed") + 0x7e57, 1);

    const double base_lr = model.train.lr;
    const double lr_gamma = cfg.get_double("model.lr_gamma");
    std::vector<int> milestones;
    for (const std::string& frac_text : [&] {
             std::vector<std::string> out;
             std::stringstream ss(cfg.get("model.lr_milestones"));
             std::string item;
             while (std::getline(ss, item, ',')) out.push_back(item);
             return out;
         }())
        milestones.push_back(static_cast<int>(std::stod(frac_text) * steps));

    const int save_every = std::max(1, steps / 10);
    double final_loss = 0.0;
    save_checkpoint(model, ckpt_path.string());  // step-0 weights are valid and loadable
    for (int step = 0; step < steps; ++step) {
        double lr = base_lr;
        for (int m : milestones)
            if (step >= m) lr *= lr_gamma;
        model.train.lr = lr;
        std::vector<TrainItem> batch;
        batch.reserve(batch_size);
        for (int b = 0; b < batch_size; ++b)
            batch.push_back(enc.items[rng.uniform_int(0, static_cast<int>(enc.items.size()) - 1)]);
        try {
            final_loss = train_step(model, batch, sched, rng);
        } catch (const std::runtime_error& e) {
            std::cerr << "error: " << e.what() << "; last good checkpoint kept at " << ckpt_path
                      << "\n";
            return 1;
        }
        loss_csv << model.global_step << ',' << final_loss << "\n";
        if ((step + 1) % save_every == 0) save_checkpoint(model, ckpt_path.string());
        if ((step + 1) % 100 == 0)
            std::cout << "step " << (step + 1) << "/" << steps << " loss " << final_loss << "\n";
    }
    save_checkpoint(model, ckpt_path.string());
    std::cout << "final loss " << final_loss << "\n";
    std::cout << "checkpoint " << ckpt_path.string() << "\n";
    std::cout << "loss curve " << loss_path.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

int cmd_predict(const RunConfig& cfg, const std::string& ckpt_path,
                const std::string& history_path, int samples, const std::string& mask_joints,
                const std::string& mask_frames, const std::string& gt_path, int plot_channel,
                bool svg) {
    const fs::path out_dir = cfg.get("out.dir");
    fs::create_directories(out_dir);
    const Denoiser<float> model = load_checkpoint<float>(ckpt_path).ema_model();
    const NoiseSchedule sched = schedule_for(model);
    const SampleConfig scfg = sample_config(cfg);
    const MotionSequence hist_seq = load_motion(history_path);
    if (hist_seq.data.cols() != model.channels)
        throw std::runtime_error("predict: history has " + std::to_string(hist_seq.data.cols()) +
                                 " channels but the checkpoint expects " +
                                 std::to_string(model.channels));
    if (hist_seq.data.rows() < model.frames_history)
        throw std::runtime_error("predict: history has " + std::to_string(hist_seq.data.rows()) +
                                 " frames but the checkpoint expects at least " +
                                 std::to_string(model.frames_history));
    // the last H observed frames condition the prediction
    const Matrix history = hist_seq.data.bottomRows(model.frames_history);

    const bool controlled = !mask_joints.empty() || !mask_frames.empty();
    Matrix mask, gt;
    if (controlled) {
        if (gt_path.empty())
            throw std::runtime_error("predict: --mask-joints/--mask-frames require --gt");
        const MotionSequence gt_seq = load_motion(gt_path);
        if (gt_seq.data.rows() != model.frames_total || gt_seq.data.cols() != model.channels)
            throw std::runtime_error("predict: --gt must be a full " +
                                     std::to_string(model.frames_total) + "x" +
                                     std::to_string(model.channels) + " sequence");
        gt = gt_seq.data;
        mask = Matrix::Zero(model.frames_total, model.channels);
        for (int j : parse_int_list(mask_joints)) {
            if (j < 0 || 3 * j + 2 >= model.channels)
                throw std::runtime_error("predict: joint index out of range: " +
                                         std::to_string(j));
            mask.middleCols(3 * j, 3).setOnes();
        }
        if (!mask_frames.empty()) {
            const auto [a, b] = parse_range(mask_frames);
            if (a < 0 || b >= model.frames_total)
                throw std::runtime_error("predict: frame range out of range: " + mask_frames);
            mask.middleRows(a, b - a + 1).setOnes();
        }
    }

    std::vector<MotionSequence> preds;
    for (int i = 0; i < samples; ++i) {
        Rng rng(scfg.seed, static_cast<std::uint64_t>(i));
        MotionSequence pred = controlled
                                  ? controlled_sample(model, history, gt, mask, sched, scfg, rng)
                                  : sample(model, history, sched, scfg, rng);
        const fs::path bin = out_dir / ("pred_" + std::to_string(i) + ".wmot");
        const fs::path csv = out_dir / ("pred_" + std::to_string(i) + ".csv");
        save_motion(bin.string(), pred);
        save_motion(csv.string(), pred);
        preds.push_back(std::move(pred));
    }

    // per-channel trajectory table for plotting: observed + each prediction
    if (plot_channel < 0 || plot_channel >= model.channels)
        throw std::runtime_error("predict: --channel out of range");
    const fs::path curves = out_dir / "curves.csv";
    {
        std::ofstream os(curves);
        os << "frame";
        if (controlled) os << ",gt";
        os << ",zero_vel";
        for (int i = 0; i < samples; ++i) os << ",pred_" << i;
        os << "\n";
        os.precision(17);
        const Matrix zv = zero_velocity_prediction(
            history, model.frames_total - model.frames_history);
        for (Index f = 0; f < model.frames_total; ++f) {
            os << f;
            if (controlled) os << ',' << gt(f, plot_channel);
            os << ','
               << (f < model.frames_history ? history(f, plot_channel)
                                            : zv(f - model.frames_history, plot_channel));
            for (const auto& p : preds) os << ',' << p.data(f, plot_channel);
            os << "\n";
        }
    }
    if (svg) {
        std::vector<std::string> names;
        std::vector<Vector> series;
        if (controlled) {
            names.push_back("gt");
            series.push_back(gt.col(plot_channel));
        }
        for (std::size_t i = 0; i < preds.size(); ++i) {
            names.push_back("pred_" + std::to_string(i));
            series.push_back(preds[i].data.col(plot_channel));
        }
        write_svg_curves((out_dir / "curves.svg").string(), names, series,
                         "channel " + std::to_string(plot_channel) + " trajectory");
    }
    std::cout << "wrote " << samples << " predictions to " << out_dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalTotals {
    MetricValues sum;
    int count = 0;
    void add(const MetricValues& v) {
        sum.apd += v.apd;
        sum.ade += v.ade;
        sum.fde += v.fde;
        sum.mmade += v.mmade;
        sum.mmfde += v.mmfde;
        ++count;
    }
    MetricValues mean() const {
        MetricValues m = sum;
        m.apd /= count;
        m.ade /= count;
        m.fde /= count;
        m.mmade /= count;
        m.mmfde /= count;
        return m;
    }
};

void write_metrics_csv(const std::string& path, const MetricValues& v, int samples,
                       int num_histories, std::uint64_t seed) {
    std::ofstream os(path);
    os << "# apd averages over unordered sample pairs\n";
    os << "metric,value,samples,num_histories,seed\n";
    os.precision(10);
    const std::pair<const char*, double> rows[] = {
        {"apd", v.apd}, {"ade", v.ade}, {"fde", v.fde}, {"mmade", v.mmade}, {"mmfde", v.mmfde}};
    for (const auto& [name, value] : rows)
        os << name << ',' << value << ',' << samples << ',' << num_histories << ',' << seed
           << "\n";
}

MetricValues run_eval(const RunConfig& cfg, const Denoiser<float>& model,
                      const NoiseSchedule& sched, const SampleConfig& scfg, bool zero_vel) {
    const Index h = model.frames_history;
    const Index f = model.frames_total - model.frames_history;
    const MotionDataset ds = make_windows(make_corpus(cfg, cfg.get_u64("eval.seed")), h, f,
                                          cfg.get_int("data.stride"));
    const int want = cfg.get_int("eval.windows");
    if (static_cast<int>(ds.windows.size()) < want)
        throw std::runtime_error("eval: corpus yields only " +
                                 std::to_string(ds.windows.size()) + " windows, need " +
                                 std::to_string(want) + " (raise data.count)");
    std::vector<Window> windows(ds.windows.begin(), ds.windows.begin() + want);

    // multi-modal grouping: histories within tau of each other share futures
    const double tau = cfg.get_double("eval.mm_tau");
    std::vector<std::vector<Matrix>> mm(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i)
        for (std::size_t j = 0; j < windows.size(); ++j)
            if ((windows[i].history - windows[j].history).norm() <= tau)
                mm[i].push_back(windows[j].future);

    const int samples = zero_vel ? 1 : cfg.get_int("eval.samples");
    std::vector<MetricValues> per_window(windows.size());
    const int threads = std::max(1, cfg.get_int("eval.threads"));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < windows.size(); i = next.fetch_add(1)) {
            PredictionSet p;
            p.gt = windows[i].future;
            p.mm_gt = mm[i];
            if (zero_vel) {
                p.samples.push_back(zero_velocity_prediction(windows[i].history, f));
            } else {
                for (int s = 0; s < samples; ++s) {
                    Rng rng(scfg.seed, static_cast<std::uint64_t>(i) * 10007 + s);
                    const MotionSequence pred =
                        sample(model, windows[i].history, sched, scfg, rng);
                    p.samples.push_back(pred.data.bottomRows(f));
                }
            }
            per_window[i] = evaluate(p);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    EvalTotals totals;
    for (const MetricValues& v : per_window) totals.add(v);
    return totals.mean();
}

int cmd_eval(const RunConfig& cfg, const std::string& ckpt_path, const std::string& baseline) {
    const fs::path out_dir = cfg.get("out.dir");
    fs::create_directories(out_dir);
    const Denoiser<float> model = load_checkpoint<float>(ckpt_path).ema_model();
    const NoiseSchedule sched = schedule_for(model);
    const SampleConfig scfg = sample_config(cfg);
    const bool zero_vel = baseline == "zero_vel";
    if (!baseline.empty() && !zero_vel)
        throw std::runtime_error("eval: unknown baseline \"" + baseline +
                                 "\" (supported: zero_vel)");
    const MetricValues v = run_eval(cfg, model, sched, scfg, zero_vel);
    const fs::path csv = out_dir / (zero_vel ? "metrics_zero_vel.csv" : "metrics.csv");
    write_metrics_csv(csv.string(), v, zero_vel ? 1 : cfg.get_int("eval.samples"),
                      cfg.get_int("eval.windows"), scfg.seed);
    std::cout << "apd " << v.apd << " ade " << v.ade << " fde " << v.fde << " mmade " << v.mmade
              << " mmfde " << v.mmfde << "\n";
    std::cout << "metrics " << csv.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// encode / decode
// ---------------------------------------------------------------------------

int cmd_encode(const RunConfig& cfg, const std::string& in, const std::string& out) {
    const WaveletBasis basis = make_basis(cfg.get("model.basis"));
    const MotionSequence motion = load_motion(in);
    save_manifold(out, encode(motion, basis), motion.fps);
    std::cout << "encoded " << in << " -> " << out << " (basis " << basis.name << ")\n";
    return 0;
}

int cmd_decode(const RunConfig&, const std::string& in, const std::string& out) {
    auto [manifold, fps] = load_manifold(in);
    const WaveletBasis basis = make_basis(manifold.basis_name);
    save_motion(out, decode(manifold, basis, fps));
    std::cout << "decoded " << in << " -> " << out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// ablations
// ---------------------------------------------------------------------------

int cmd_ablate_bases(const RunConfig& cfg) {
    const fs::path out_dir = cfg.get("out.dir");
    fs::create_directories(out_dir);
    const std::vector<MotionSequence> corpus = make_corpus(cfg, cfg.get_u64("data.seed"));
    const fs::path csv = out_dir / "ablate_bases.csv";
    std::ofstream os(csv);
    os << "basis,position_rmse,velocity_rmse,acceleration_rmse\n";
    os.precision(10);
    for (const std::string& name : supported_bases()) {
        const WaveletBasis basis = make_basis(name);
        double pos_sq = 0, vel_sq = 0, acc_sq = 0;
        std::size_t pos_n = 0, vel_n = 0, acc_n = 0;
        for (const MotionSequence& m : corpus) {
            const MotionSequence back = decode(encode(m, basis), basis, m.fps);
            const Matrix err = back.data - m.data;
            const Index rows = err.rows();
            pos_sq += err.squaredNorm();
            pos_n += err.size();
            const Matrix verr = err.bottomRows(rows - 1) - err.topRows(rows - 1);
            vel_sq += verr.squaredNorm();
            vel_n += verr.size();
            const Matrix aerr = verr.bottomRows(rows - 2) - verr.topRows(rows - 2);
            acc_sq += aerr.squaredNorm();
            acc_n += aerr.size();
        }
        os << name << ',' << std::sqrt(pos_sq / pos_n) << ',' << std::sqrt(vel_sq / vel_n) << ','
           << std::sqrt(acc_sq / acc_n) << "\n";
    }
    std::cout << "wrote " << csv.string() << "\n";
    return 0;
}

int cmd_ablate_guidance(const RunConfig& cfg, const std::string& ckpt_path) {
    const fs::path out_dir = cfg.get("out.dir");
    fs::create_directories(out_dir);
    const Denoiser<float> model = load_checkpoint<float>(ckpt_path).ema_model();
    const NoiseSchedule sched = schedule_for(model);
    const fs::path csv = out_dir / "ablate_guidance.csv";
    std::ofstream os(csv);
    os << "s,sigma,wmsg,w,apd,ade,fde,mmade,mmfde\n";
    os.precision(10);
    struct Combo {
        double s, sigma;
        bool wmsg;
    };
    std::vector<Combo> combos = {{0.0, 0.0, false}, {0.0, 0.0, true}};
    for (double s : {0.5, 1.0, 1.5})
        for (double sigma : {0.5, 1.5, 2.5}) combos.push_back({s, sigma, true});
    for (const Combo& c : combos) {
        SampleConfig scfg = sample_config(cfg);
        scfg.s = c.s;
        scfg.sigma = c.sigma;
        scfg.wmsg_enabled = c.wmsg;
        const MetricValues v = run_eval(cfg, model, sched, scfg, false);
        os << c.s << ',' << c.sigma << ',' << (c.wmsg ? "true" : "false") << ',' << scfg.w << ','
           << v.apd << ',' << v.ade << ',' << v.fde << ',' << v.mmade << ',' << v.mmfde << "\n";
        std::cout << "s=" << c.s << " sigma=" << c.sigma << " wmsg=" << c.wmsg
                  << " ade=" << v.ade << "\n";
    }
    std::cout << "wrote " << csv.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavelet-domain diffusion for motion prediction"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    std::string config_path, dump_path;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--set", overrides, "override one key, e.g. --set sample.w=0.5");
    app.add_option("--dump-config", dump_path, "write the effective config and continue");
    app.footer("config keys:\n" + RunConfig::describe());

    std::string resume, ckpt, history, gt_file, mask_joints, mask_frames, in_file, out_file;
    std::string baseline;
    int samples = 1, plot_channel = 0;
    bool svg = false;

    CLI::App* train = app.add_subcommand("train", "train a denoiser on synthetic motion");
    train->add_option("--resume", resume, "checkpoint to continue from");

    CLI::App* predict = app.add_subcommand("predict", "sample future motion for a history");
    predict->add_option("--checkpoint", ckpt, "model checkpoint")->required();
    predict->add_option("--history", history, "observed motion file (.wmot or .csv)")->required();
    predict->add_option("--samples", samples, "number of futures to sample");
    predict->add_option("--mask-joints", mask_joints, "joint indices to pin to --gt, e.g. 0,1,2");
    predict->add_option("--mask-frames", mask_frames, "frame range to pin to --gt, e.g. 100..124");
    predict->add_option("--gt", gt_file, "full-length target motion for masked control");
    predict->add_option("--channel", plot_channel, "channel for curves.csv / curves.svg");
    predict->add_flag("--svg", svg, "also render curves.svg");

    CLI::App* eval = app.add_subcommand("eval", "compute apd/ade/fde/mmade/mmfde on test windows");
    eval->add_option("--checkpoint", ckpt, "model checkpoint")->required();
    eval->add_option("--baseline", baseline, "evaluate a baseline instead (zero_vel)");

    CLI::App* encode_cmd = app.add_subcommand("encode", "motion file -> wavelet manifold file");
    encode_cmd->add_option("--in", in_file, "input motion")->required();
    encode_cmd->add_option("--out", out_file, "output manifold (.wman)")->required();

    CLI::App* decode_cmd = app.add_subcommand("decode", "wavelet manifold file -> motion file");
    decode_cmd->add_option("--in", in_file, "input manifold (.wman)")->required();
    decode_cmd->add_option("--out", out_file, "output motion")->required();

    CLI::App* ab = app.add_subcommand("ablate-bases", "roundtrip rmse table over all bases");
    CLI::App* ag = app.add_subcommand("ablate-guidance", "metric sweep over s and sigma");
    ag->add_option("--checkpoint", ckpt, "model checkpoint")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg.load_file(config_path);
        for (const std::string& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("--set needs key=value, got: " + kv);
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!dump_path.empty()) cfg.dump_to_file(dump_path);

        if (train->parsed()) return cmd_train(cfg, resume);
        if (predict->parsed())
            return cmd_predict(cfg, ckpt, history, samples, mask_joints, mask_frames, gt_file,
                               plot_channel, svg);
        if (eval->parsed()) return cmd_eval(cfg, ckpt, baseline);
        if (encode_cmd->parsed()) return cmd_encode(cfg, in_file, out_file);
        if (decode_cmd->parsed()) return cmd_decode(cfg, in_file, out_file);
        if (ab->parsed()) return cmd_ablate_bases(cfg);
        if (ag->parsed()) return cmd_ablate_guidance(cfg, ckpt);
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (char& c : msg)
            if (c == '\n') c = ' ';
        std::cerr << "error: " << msg << "\n";
        return 1;
    }
    return 0;
}
