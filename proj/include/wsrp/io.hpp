// SPDX-License-Identifier: Apache-2.0
//
// wsrp - equivariant precoder learning and simulation toolkit
// Copyright (C) 2026 the wsrp contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Serialization: strict JSON parsing (unknown keys are rejected), the
// versioned checkpoint format, the WMMSE reference cache, and CSV output.
//
// Checkpoint files are JSON with the network config and the flat parameter
// vector in NetParams::flatten() order; instance sizes never appear, so a
// checkpoint loads across any (N, K). An optional trainer block (epoch,
// optimizer moments) makes interrupted runs resumable.

#ifndef WSRP_IO_HPP
#define WSRP_IO_HPP

#include "wsrp/common.hpp"
#include "wsrp/dataset.hpp"
#include "wsrp/net.hpp"
#include "wsrp/training.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

namespace wsrp {

// Wraps a JSON object; every key must be consumed before finish() or parsing
// fails. Catches config typos instead of silently ignoring them. Holds its
// own copy so it can wrap subobject temporaries.
class StrictJson {
public:
    StrictJson(Json j, std::string location) : json_(std::move(j)), location_(std::move(location)) {
        require(json_.is_object(), location_ + ": expected a JSON object");
    }

    bool has(const std::string& key) const { return json_.contains(key); }

    template <typename T>
    T get(const std::string& key, T fallback) {
        if (!json_.contains(key))
            return fallback;
        used_.insert(key);
        return json_.at(key).get<T>();
    }

    Json raw(const std::string& key) {
        require(json_.contains(key), location_ + ": missing key '" + key + "'");
        used_.insert(key);
        return json_.at(key);
    }

    Json raw_or(const std::string& key, Json fallback) {
        if (!json_.contains(key))
            return fallback;
        used_.insert(key);
        return json_.at(key);
    }

    void finish() const {
        for (const auto& item : json_.items())
            if (!used_.contains(item.key()))
                throw std::invalid_argument(location_ + ": unknown key '" + item.key() + "'");
    }

private:
    Json json_;
    std::string location_;
    std::set<std::string> used_;
};

inline void write_text_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        require(out.good(), "write_text_file: cannot open " + tmp);
        out << content;
        require(out.good(), "write_text_file: write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "read_text_file: cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// --- network config ---------------------------------------------------------

inline const char* to_string(ActivationScope s) {
    switch (s) {
    case ActivationScope::per_channel: return "per_channel";
    case ActivationScope::global: return "global";
    case ActivationScope::per_column: return "per_column";
    case ActivationScope::per_channel_mean: return "per_channel_mean";
    }
    return "?";
}

inline ActivationScope activation_scope_from_string(const std::string& s) {
    if (s == "per_channel")
        return ActivationScope::per_channel;
    if (s == "global")
        return ActivationScope::global;
    if (s == "per_column")
        return ActivationScope::per_column;
    if (s == "per_channel_mean")
        return ActivationScope::per_channel_mean;
    throw std::invalid_argument("unknown activation scope: " + s);
}

inline const char* to_string(InputScale s) {
    switch (s) {
    case InputScale::none: return "none";
    case InputScale::unit_entry: return "unit_entry";
    case InputScale::unit_column: return "unit_column";
    }
    return "?";
}

inline InputScale input_scale_from_string(const std::string& s) {
    if (s == "none")
        return InputScale::none;
    if (s == "unit_entry")
        return InputScale::unit_entry;
    if (s == "unit_column")
        return InputScale::unit_column;
    throw std::invalid_argument("unknown input scale: " + s);
}

inline Json to_json(const NetConfig& c) {
    return Json{{"num_layers", c.num_layers},
                {"hidden_channels", c.hidden_channels},
                {"subnet_layers", c.subnet_layers},
                {"subnet_hidden_channels", c.subnet_hidden_channels},
                {"residual_identity", c.residual_identity},
                {"residual_mean_mixing", c.residual_mean_mixing},
                {"feature_norm", c.feature_norm},
                {"activation_scope", to_string(c.activation_scope)},
                {"input_scale", to_string(c.input_scale)},
                {"scale_weights", c.scale_weights},
                {"leaky_slope", c.leaky_slope},
                {"init_scale", c.init_scale}};
}

inline NetConfig net_config_from_json(const Json& j, const std::string& location = "net") {
    StrictJson s(j, location);
    NetConfig c;
    c.num_layers = s.get("num_layers", c.num_layers);
    c.hidden_channels = s.get("hidden_channels", c.hidden_channels);
    c.subnet_layers = s.get("subnet_layers", c.subnet_layers);
    c.subnet_hidden_channels = s.get("subnet_hidden_channels", c.subnet_hidden_channels);
    c.residual_identity = s.get("residual_identity", c.residual_identity);
    c.residual_mean_mixing = s.get("residual_mean_mixing", c.residual_mean_mixing);
    c.feature_norm = s.get("feature_norm", c.feature_norm);
    c.activation_scope = activation_scope_from_string(
        s.get<std::string>("activation_scope", to_string(c.activation_scope)));
    c.input_scale =
        input_scale_from_string(s.get<std::string>("input_scale", to_string(c.input_scale)));
    c.scale_weights = s.get("scale_weights", c.scale_weights);
    c.leaky_slope = s.get("leaky_slope", c.leaky_slope);
    c.init_scale = s.get("init_scale", c.init_scale);
    s.finish();
    validate(c);
    return c;
}

// --- checkpoints -------------------------------------------------------------

struct Checkpoint {
    NetConfig net;
    NetParams params;
    bool has_trainer = false;
    OptimizerState opt;
    int next_epoch = 0;
};

inline void save_checkpoint(const std::string& path, const NetConfig& cfg,
                            const NetParams& params, const OptimizerState* opt = nullptr,
                            int next_epoch = 0) {
    Json j{{"format", "wsrp.checkpoint"},
           {"version", 1},
           {"net", to_json(cfg)},
           {"params", to_json(params.flatten())}};
    if (opt) {
        j["trainer"] = Json{{"next_epoch", next_epoch},
                            {"step", opt->step},
                            {"adam_m", to_json(opt->m)},
                            {"adam_v", to_json(opt->v)}};
    }
    write_text_file(path, j.dump() + "\n");
}

inline Checkpoint load_checkpoint(const std::string& path) {
    const Json j = Json::parse(read_text_file(path));
    require(j.at("format") == "wsrp.checkpoint", "load_checkpoint: not a checkpoint file");
    require(j.at("version") == 1, "load_checkpoint: unsupported version");
    Checkpoint ck;
    ck.net = net_config_from_json(j.at("net"), path + ":net");
    ck.params = NetParams::zeros(ck.net);
    ck.params.unflatten(rvec_from_json(j.at("params")));
    if (j.contains("trainer")) {
        ck.has_trainer = true;
        const Json& t = j.at("trainer");
        ck.next_epoch = t.at("next_epoch").get<int>();
        ck.opt.step = t.at("step").get<long>();
        ck.opt.m = rvec_from_json(t.at("adam_m"));
        ck.opt.v = rvec_from_json(t.at("adam_v"));
    }
    return ck;
}

// --- WMMSE reference cache ----------------------------------------------------

inline Json to_json(const WmmseOptions& o) {
    return Json{{"max_iters", o.max_iters},
                {"rel_tol", o.rel_tol},
                {"bisect_tol", o.bisect_tol},
                {"mu_growth", o.mu_growth}};
}

inline WmmseOptions wmmse_options_from_json(const Json& j, const std::string& location = "wmmse") {
    StrictJson s(j, location);
    WmmseOptions o;
    o.max_iters = s.get("max_iters", o.max_iters);
    o.rel_tol = s.get("rel_tol", o.rel_tol);
    o.bisect_tol = s.get("bisect_tol", o.bisect_tol);
    o.mu_growth = s.get("mu_growth", o.mu_growth);
    s.finish();
    validate(o);
    return o;
}

struct WmmseCacheFile {
    std::string dataset_fingerprint;
    std::string options_fingerprint;
    std::vector<double> wsr; // may be a prefix while the cache is being filled
};

inline void save_wmmse_cache(const std::string& path, const WmmseCacheFile& cache,
                             const WmmseOptions& opts) {
    Json j{{"format", "wsrp.wmmse-cache"},
           {"version", 1},
           {"dataset_fingerprint", cache.dataset_fingerprint},
           {"options_fingerprint", cache.options_fingerprint},
           {"options", to_json(opts)},
           {"count", cache.wsr.size()},
           {"wsr", cache.wsr}};
    write_text_file(path, j.dump() + "\n");
}

inline WmmseCacheFile load_wmmse_cache(const std::string& path) {
    const Json j = Json::parse(read_text_file(path));
    require(j.at("format") == "wsrp.wmmse-cache", "load_wmmse_cache: not a cache file");
    require(j.at("version") == 1, "load_wmmse_cache: unsupported version");
    WmmseCacheFile c;
    c.dataset_fingerprint = j.at("dataset_fingerprint").get<std::string>();
    c.options_fingerprint = j.at("options_fingerprint").get<std::string>();
    c.wsr = j.at("wsr").get<std::vector<double>>();
    require(c.wsr.size() == j.at("count").get<std::size_t>(),
            "load_wmmse_cache: count does not match the payload");
    return c;
}

// --- CSV ----------------------------------------------------------------------

// 17 significant digits: doubles survive the round trip unchanged.
inline std::string csv_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

class CsvWriter {
public:
    explicit CsvWriter(std::string header) { rows_.push_back(std::move(header)); }

    void comment(const std::string& text) {
        rows_.insert(rows_.begin() + static_cast<long>(comments_++), "# " + text);
    }

    template <typename... Fields>
    void row(const Fields&... fields) {
        std::string line;
        ((line += field_to_string(fields) + ","), ...);
        if (!line.empty())
            line.pop_back();
        rows_.push_back(std::move(line));
    }

    void save(const std::string& path) const {
        std::string out;
        for (const auto& r : rows_)
            out += r + "\n";
        write_text_file(path, out);
    }

private:
    static std::string field_to_string(double v) { return csv_double(v); }
    static std::string field_to_string(int v) { return std::to_string(v); }
    static std::string field_to_string(long v) { return std::to_string(v); }
    static std::string field_to_string(std::size_t v) { return std::to_string(v); }
    static std::string field_to_string(const std::string& v) { return v; }
    static std::string field_to_string(const char* v) { return v; }

    std::vector<std::string> rows_;
    std::size_t comments_ = 0;
};

} // namespace wsrp

#endif // WSRP_IO_HPP
