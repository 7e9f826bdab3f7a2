// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WaveMotion Project Contributors

#include "wavemotion/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wavemotion {

namespace {

struct KeySpec {
    const char* key;
    const char* def;
    const char* help;
};

const std::vector<KeySpec>& registry() {
    static const std::vector<KeySpec> keys = {
        {"data.kind", "sine_walk", "synthetic motion kind: sine_walk chirp stop_start mixture"},
        {"data.count", "64", "number of synthetic sequences in the corpus"},
        {"data.frames", "48", "frames per synthetic sequence"},
        {"data.joints", "5", "joints per frame (channels = 3*joints)"},
        {"data.h", "16", "observed history frames per window"},
        {"data.f", "32", "future frames per window"},
        {"data.stride", "48", "window stride in frames"},
        {"data.fps", "25", "frames per second metadata"},
        {"data.seed", "1", "seed for synthetic data generation"},
        {"model.blocks", "4", "denoiser blocks"},
        {"model.latent_dim", "64", "denoiser latent width (even, divisible by heads)"},
        {"model.heads", "4", "attention heads"},
        {"model.cond_drop", "0.1", "condition dropout probability during training"},
        {"model.basis", "bior2.8", "wavelet basis for the manifold"},
        {"model.train_steps", "2000", "optimizer updates to run"},
        {"model.batch", "16", "batch size"},
        {"model.lr", "1e-4", "initial learning rate"},
        {"model.lr_gamma", "1.0", "multi-step lr decay factor (1.0 = constant lr)"},
        {"model.lr_milestones", "0.6,0.8", "lr decay milestones as fractions of train_steps"},
        {"model.weight_decay", "1e-4", "decoupled weight decay"},
        {"model.ema", "0.999", "EMA decay applied throughout training"},
        {"model.seed", "7", "weight init / training seed"},
        {"schedule.kind", "cosine", "noise schedule: cosine linear sigmoid"},
        {"schedule.steps", "1000", "diffusion steps T"},
        {"sample.ddim_steps", "100", "DDIM steps (evenly spaced over T)"},
        {"sample.w", "1.0", "CFG scale; eps = eps_tilde + w (eps_cond - eps_tilde)"},
        {"sample.s", "1.0", "attention-guidance scale"},
        {"sample.sigma", "2.5", "attention-guidance noise scale"},
        {"sample.phi_quantile", "0.8", "attention threshold quantile"},
        {"sample.m", "3", "attention mask width in frames (odd)"},
        {"sample.tabg_window", "90", "apply attention guidance in the first N steps"},
        {"sample.wmsg", "true", "per-step wavelet-manifold projection"},
        {"sample.control_window", "90", "apply control-mask blending in the first N steps"},
        {"sample.x0_clip", "20.0", "clamp on the per-step x0 estimate (0 disables)"},
        {"sample.t_start", "0", "truncated warm start from the history prior (0 = full T)"},
        {"sample.seed", "0", "sampling seed"},
        {"eval.samples", "50", "predictions per test window"},
        {"eval.windows", "20", "test windows to evaluate"},
        {"eval.mm_tau", "0.5", "history L2 radius for multi-modal grouping"},
        {"eval.seed", "99", "test corpus seed"},
        {"eval.threads", "1", "worker threads for evaluation"},
        {"out.dir", "out", "output directory"},
    };
    return keys;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void unknown_key(const std::string& key) {
    throw std::invalid_argument("unknown config key \"" + key +
                                "\" (see --help for the key list)");
}

}  // namespace

RunConfig::RunConfig() {
    for (const auto& k : registry()) values_[k.key] = k.def;
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(lineno) +
                                     " is not key = value: " + path);
        set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void RunConfig::set(const std::string& key, const std::string& value) {
    auto it = values_.find(key);
    if (it == values_.end()) unknown_key(key);
    it->second = value;
}

const std::string& RunConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) unknown_key(key);
    return it->second;
}

int RunConfig::get_int(const std::string& key) const {
    try {
        return std::stoi(get(key));
    } catch (const std::exception&) {
        throw std::invalid_argument("config: " + key + " must be an integer, got \"" +
                                    get(key) + "\"");
    }
}

double RunConfig::get_double(const std::string& key) const {
    try {
        return std::stod(get(key));
    } catch (const std::exception&) {
        throw std::invalid_argument("config: " + key + " must be a number, got \"" + get(key) +
                                    "\"");
    }
}

bool RunConfig::get_bool(const std::string& key) const {
    const std::string& v = get(key);
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw std::invalid_argument("config: " + key + " must be true/false, got \"" + v + "\"");
}

std::uint64_t RunConfig::get_u64(const std::string& key) const {
    try {
        return std::stoull(get(key));
    } catch (const std::exception&) {
        throw std::invalid_argument("config: " + key + " must be a non-negative integer, got \"" +
                                    get(key) + "\"");
    }
}

std::string RunConfig::dump() const {
    std::ostringstream os;
    for (const auto& [k, v] : values_) os << k << " = " << v << "\n";
    return os.str();
}

void RunConfig::dump_to_file(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("config: cannot write: " + path);
    os << dump();
}

std::string RunConfig::describe() {
    std::ostringstream os;
    for (const auto& k : registry())
        os << "  " << k.key << " (" << k.def << ") — " << k.help << "\n";
    return os.str();
}

}  // namespace wavemotion
