// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WaveMotion Project Contributors

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace wavemotion {

/// Flat key = value configuration with a fixed key registry. Unknown keys are
/// rejected; every key has a documented default (see `describe()` / README).
class RunConfig {
public:
    RunConfig();

    /// Parse a line-based config file: `key = value`, '#' comments, blank
    /// lines ignored.
    void load_file(const std::string& path);

    /// Apply one `key=value` override (CLI).
    void set(const std::string& key, const std::string& value);

    const std::string& get(const std::string& key) const;
    int get_int(const std::string& key) const;
    double get_double(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;

    /// Effective config, sorted by key, in reloadable `key = value` form.
    std::string dump() const;
    void dump_to_file(const std::string& path) const;

    /// One "key (default) — help" line per key.
    static std::string describe();

private:
    std::map<std::string, std::string> values_;
};

}  // namespace wavemotion
