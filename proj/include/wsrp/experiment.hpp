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
// Experiment runner: a strictly-validated JSON config drives dataset
// generation, training, evaluation, proportional-fairness episodes, the
// weight-structure oracle, and gradient checking. Every command writes the
// fully resolved config next to its outputs, and all outputs are
// deterministic functions of (config, seed) so reruns are byte-identical.

#ifndef WSRP_EXPERIMENT_HPP
#define WSRP_EXPERIMENT_HPP

#include "wsrp/commutant.hpp"
#include "wsrp/io.hpp"
#include "wsrp/pf.hpp"
#include "wsrp/training.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace wsrp {

struct InstanceConfig {
    int n = 8;
    int k = 4;
    double snr_edge_db = 5.0;
    double power_budget = 1.0;
};

struct GenConfig {
    int num_train_samples = 2048;
    int num_eval_samples = 512;
    WeightLaw weight_law = WeightLaw::dirichlet;
    bool wmmse_reference = true;  // cache WMMSE objectives for the eval split
    bool train_reference = false; // also cache them for the training split
    PfReplaySettings pf_replay;
};

struct PfRunConfig {
    int num_episodes = 200;
    int num_slots = 20;
    double correlation = 0.9;
    double weight_cap = 1e6;
    bool save_traces = false;
    std::vector<std::string> policies = {"net", "wmmse", "wmmse_srm"};
};

struct SweepConfig {
    SweepAxis axis = SweepAxis::num_ues;
    std::vector<double> values;
    int num_samples = 64;
    std::vector<std::string> policies = {"net"};
};

struct EvalConfig {
    std::vector<std::string> policies = {"net", "wmmse", "mrt", "zf"};
    std::vector<SweepConfig> sweeps;
};

struct OracleConfig {
    int n = 3;
    int k = 2;
    int perm_k = 4;
    int num_group_samples = 64;
};

struct GradcheckConfig {
    int n = 4;
    int k = 3;
    int hidden_channels = 2;
    int num_points = 3;
    int batch_size = 2;
    double step = 1e-6;
    double tolerance = 1e-4;
};

struct ExperimentConfig {
    std::uint64_t seed = 1;
    std::string output_dir = "runs/out";
    int jobs = 1;
    Geometry geometry;
    InstanceConfig instance;
    GenConfig gen;
    NetConfig net;
    TrainConfig train;
    WmmseOptions wmmse;
    PfRunConfig pf;
    EvalConfig eval;
    OracleConfig oracle;
    GradcheckConfig gradcheck;
};

// --- config (de)serialization -------------------------------------------------

inline Json to_json(const InstanceConfig& c) {
    return Json{{"n", c.n},
                {"k", c.k},
                {"snr_edge_db", c.snr_edge_db},
                {"power_budget", c.power_budget}};
}

inline Json to_json(const TrainConfig& c) {
    return Json{{"batch_size", c.batch_size},
                {"learning_rate", c.learning_rate},
                {"num_samples", c.num_samples},
                {"epochs", c.epochs},
                {"optimizer", to_string(c.optimizer)},
                {"adam_beta1", c.adam_beta1},
                {"adam_beta2", c.adam_beta2},
                {"adam_epsilon", c.adam_epsilon},
                {"weight_sampling", to_string(c.weight_sampling)}};
}

inline Json to_json(const PfReplaySettings& c) {
    return Json{{"n", c.n},
                {"snr_edge_db", c.snr_edge_db},
                {"power_budget", c.power_budget},
                {"episodes", c.episodes},
                {"num_slots", c.num_slots},
                {"correlation", c.correlation}};
}

inline Json to_json(const GenConfig& c) {
    return Json{{"num_train_samples", c.num_train_samples},
                {"num_eval_samples", c.num_eval_samples},
                {"weight_law", to_string(c.weight_law)},
                {"wmmse_reference", c.wmmse_reference},
                {"train_reference", c.train_reference},
                {"pf_replay", to_json(c.pf_replay)}};
}

inline Json to_json(const PfRunConfig& c) {
    return Json{{"num_episodes", c.num_episodes},
                {"num_slots", c.num_slots},
                {"correlation", c.correlation},
                {"weight_cap", c.weight_cap},
                {"save_traces", c.save_traces},
                {"policies", c.policies}};
}

inline Json to_json(const SweepConfig& c) {
    return Json{{"axis", to_string(c.axis)},
                {"values", c.values},
                {"num_samples", c.num_samples},
                {"policies", c.policies}};
}

inline Json to_json(const EvalConfig& c) {
    Json sweeps = Json::array();
    for (const auto& s : c.sweeps)
        sweeps.push_back(to_json(s));
    return Json{{"policies", c.policies}, {"sweeps", sweeps}};
}

inline Json to_json(const OracleConfig& c) {
    return Json{{"n", c.n},
                {"k", c.k},
                {"perm_k", c.perm_k},
                {"num_group_samples", c.num_group_samples}};
}

inline Json to_json(const GradcheckConfig& c) {
    return Json{{"n", c.n},
                {"k", c.k},
                {"hidden_channels", c.hidden_channels},
                {"num_points", c.num_points},
                {"batch_size", c.batch_size},
                {"step", c.step},
                {"tolerance", c.tolerance}};
}

inline Json to_json(const ExperimentConfig& c) {
    return Json{{"seed", c.seed},
                {"output_dir", c.output_dir},
                {"jobs", c.jobs},
                {"version", kVersion},
                {"geometry", to_json(c.geometry)},
                {"instance", to_json(c.instance)},
                {"gen", to_json(c.gen)},
                {"net", to_json(c.net)},
                {"train", to_json(c.train)},
                {"wmmse", to_json(c.wmmse)},
                {"pf", to_json(c.pf)},
                {"eval", to_json(c.eval)},
                {"oracle", to_json(c.oracle)},
                {"gradcheck", to_json(c.gradcheck)}};
}

inline ExperimentConfig experiment_config_from_json(const Json& j) {
    StrictJson root(j, "config");
    ExperimentConfig c;
    c.seed = root.get<std::uint64_t>("seed", c.seed);
    c.output_dir = root.get<std::string>("output_dir", c.output_dir);
    c.jobs = root.get("jobs", c.jobs);
    (void)root.get<std::string>("version", kVersion); // informational

    if (root.has("geometry")) {
        StrictJson g(root.raw("geometry"), "geometry");
        c.geometry.cell_radius_m = g.get("cell_radius_m", c.geometry.cell_radius_m);
        c.geometry.min_distance_m = g.get("min_distance_m", c.geometry.min_distance_m);
        c.geometry.pathloss_1m_db = g.get("pathloss_1m_db", c.geometry.pathloss_1m_db);
        c.geometry.pathloss_exponent_coeff =
            g.get("pathloss_exponent_coeff", c.geometry.pathloss_exponent_coeff);
        g.finish();
        validate(c.geometry);
    }
    if (root.has("instance")) {
        StrictJson i(root.raw("instance"), "instance");
        c.instance.n = i.get("n", c.instance.n);
        c.instance.k = i.get("k", c.instance.k);
        c.instance.snr_edge_db = i.get("snr_edge_db", c.instance.snr_edge_db);
        c.instance.power_budget = i.get("power_budget", c.instance.power_budget);
        i.finish();
        require(c.instance.n >= 1 && c.instance.k >= 1 && c.instance.power_budget > 0.0,
                "instance: invalid sizes or power budget");
    }
    if (root.has("gen")) {
        StrictJson g(root.raw("gen"), "gen");
        c.gen.num_train_samples = g.get("num_train_samples", c.gen.num_train_samples);
        c.gen.num_eval_samples = g.get("num_eval_samples", c.gen.num_eval_samples);
        c.gen.weight_law =
            weight_law_from_string(g.get<std::string>("weight_law", to_string(c.gen.weight_law)));
        c.gen.wmmse_reference = g.get("wmmse_reference", c.gen.wmmse_reference);
        c.gen.train_reference = g.get("train_reference", c.gen.train_reference);
        if (g.has("pf_replay")) {
            StrictJson r(g.raw("pf_replay"), "gen.pf_replay");
            c.gen.pf_replay.n = r.get("n", c.instance.n);
            c.gen.pf_replay.snr_edge_db = r.get("snr_edge_db", c.instance.snr_edge_db);
            c.gen.pf_replay.power_budget = r.get("power_budget", c.instance.power_budget);
            c.gen.pf_replay.episodes = r.get("episodes", c.gen.pf_replay.episodes);
            c.gen.pf_replay.num_slots = r.get("num_slots", c.gen.pf_replay.num_slots);
            c.gen.pf_replay.correlation = r.get("correlation", c.gen.pf_replay.correlation);
            r.finish();
        } else {
            c.gen.pf_replay.n = c.instance.n;
            c.gen.pf_replay.snr_edge_db = c.instance.snr_edge_db;
            c.gen.pf_replay.power_budget = c.instance.power_budget;
        }
        c.gen.pf_replay.geometry = c.geometry;
        g.finish();
        require(c.gen.num_train_samples >= 1 && c.gen.num_eval_samples >= 0,
                "gen: invalid sample counts");
    } else {
        c.gen.pf_replay.n = c.instance.n;
        c.gen.pf_replay.snr_edge_db = c.instance.snr_edge_db;
        c.gen.pf_replay.power_budget = c.instance.power_budget;
        c.gen.pf_replay.geometry = c.geometry;
    }
    if (root.has("net"))
        c.net = net_config_from_json(root.raw("net"));
    if (root.has("train")) {
        StrictJson t(root.raw("train"), "train");
        c.train.batch_size = t.get("batch_size", c.train.batch_size);
        c.train.learning_rate = t.get("learning_rate", c.train.learning_rate);
        c.train.num_samples = t.get("num_samples", c.gen.num_train_samples);
        c.train.epochs = t.get("epochs", c.train.epochs);
        c.train.optimizer =
            optimizer_from_string(t.get<std::string>("optimizer", to_string(c.train.optimizer)));
        c.train.adam_beta1 = t.get("adam_beta1", c.train.adam_beta1);
        c.train.adam_beta2 = t.get("adam_beta2", c.train.adam_beta2);
        c.train.adam_epsilon = t.get("adam_epsilon", c.train.adam_epsilon);
        c.train.weight_sampling = weight_law_from_string(
            t.get<std::string>("weight_sampling", to_string(c.train.weight_sampling)));
        t.finish();
    } else {
        c.train.num_samples = c.gen.num_train_samples;
    }
    c.train.seed = c.seed;
    c.train.jobs = c.jobs;
    validate(c.train);
    if (root.has("wmmse"))
        c.wmmse = wmmse_options_from_json(root.raw("wmmse"));
    if (root.has("pf")) {
        StrictJson p(root.raw("pf"), "pf");
        c.pf.num_episodes = p.get("num_episodes", c.pf.num_episodes);
        c.pf.num_slots = p.get("num_slots", c.pf.num_slots);
        c.pf.correlation = p.get("correlation", c.pf.correlation);
        c.pf.weight_cap = p.get("weight_cap", c.pf.weight_cap);
        c.pf.save_traces = p.get("save_traces", c.pf.save_traces);
        c.pf.policies = p.get("policies", c.pf.policies);
        p.finish();
        require(c.pf.num_episodes >= 1 && c.pf.num_slots >= 1, "pf: invalid counts");
        require(c.pf.correlation >= 0.0 && c.pf.correlation <= 1.0, "pf: correlation in [0,1]");
    }
    if (root.has("eval")) {
        StrictJson e(root.raw("eval"), "eval");
        c.eval.policies = e.get("policies", c.eval.policies);
        if (e.has("sweeps")) {
            c.eval.sweeps.clear();
            for (const Json& sj : e.raw("sweeps")) {
                StrictJson s(sj, "eval.sweeps[]");
                SweepConfig sc;
                sc.axis = sweep_axis_from_string(s.get<std::string>("axis", "num_ues"));
                sc.values = s.get("values", std::vector<double>{});
                sc.num_samples = s.get("num_samples", sc.num_samples);
                sc.policies = s.get("policies", sc.policies);
                s.finish();
                require(!sc.values.empty(), "eval.sweeps[]: empty value list");
                c.eval.sweeps.push_back(std::move(sc));
            }
        }
        e.finish();
    }
    if (root.has("oracle")) {
        StrictJson o(root.raw("oracle"), "oracle");
        c.oracle.n = o.get("n", c.oracle.n);
        c.oracle.k = o.get("k", c.oracle.k);
        c.oracle.perm_k = o.get("perm_k", c.oracle.perm_k);
        c.oracle.num_group_samples = o.get("num_group_samples", c.oracle.num_group_samples);
        o.finish();
    }
    if (root.has("gradcheck")) {
        StrictJson g(root.raw("gradcheck"), "gradcheck");
        c.gradcheck.n = g.get("n", c.gradcheck.n);
        c.gradcheck.k = g.get("k", c.gradcheck.k);
        c.gradcheck.hidden_channels = g.get("hidden_channels", c.gradcheck.hidden_channels);
        c.gradcheck.num_points = g.get("num_points", c.gradcheck.num_points);
        c.gradcheck.batch_size = g.get("batch_size", c.gradcheck.batch_size);
        c.gradcheck.step = g.get("step", c.gradcheck.step);
        c.gradcheck.tolerance = g.get("tolerance", c.gradcheck.tolerance);
        g.finish();
    }
    root.finish();
    return c;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    return experiment_config_from_json(Json::parse(read_text_file(path)));
}

// --- shared paths ---------------------------------------------------------------

namespace paths {
inline std::string train_set(const ExperimentConfig& c) { return c.output_dir + "/train.jsonl"; }
inline std::string eval_set(const ExperimentConfig& c) { return c.output_dir + "/eval.jsonl"; }
inline std::string train_refs(const ExperimentConfig& c) { return c.output_dir + "/train.wmmse.json"; }
inline std::string eval_refs(const ExperimentConfig& c) { return c.output_dir + "/eval.wmmse.json"; }
inline std::string checkpoint(const ExperimentConfig& c) { return c.output_dir + "/checkpoint.json"; }
inline std::string history(const ExperimentConfig& c) { return c.output_dir + "/history.csv"; }
inline std::string resolved_config(const ExperimentConfig& c) {
    return c.output_dir + "/resolved_config.json";
}
inline std::string metrics(const ExperimentConfig& c) { return c.output_dir + "/metrics.json"; }
inline std::string pf_metrics(const ExperimentConfig& c) { return c.output_dir + "/pf_metrics.json"; }
} // namespace paths

inline void write_resolved_config(const ExperimentConfig& c) {
    std::filesystem::create_directories(c.output_dir);
    write_text_file(paths::resolved_config(c), to_json(c).dump(2) + "\n");
}

inline std::string config_fingerprint(const ExperimentConfig& c) {
    return string_fingerprint(to_json(c).dump());
}

// --- WMMSE reference cache with resume ---------------------------------------

struct RefStats {
    int computed = 0;
    int cached = 0;
};

inline std::vector<double> ensure_wmmse_references(const std::vector<Sample>& samples,
                                                   const std::string& dataset_path,
                                                   const std::string& cache_path,
                                                   const WmmseOptions& opts, int jobs,
                                                   RefStats* stats = nullptr) {
    const std::string data_fp = file_fingerprint(dataset_path);
    const std::string opts_fp = string_fingerprint(to_json(opts).dump());

    WmmseCacheFile cache;
    cache.dataset_fingerprint = data_fp;
    cache.options_fingerprint = opts_fp;
    if (std::filesystem::exists(cache_path)) {
        const WmmseCacheFile existing = load_wmmse_cache(cache_path);
        if (existing.dataset_fingerprint == data_fp && existing.options_fingerprint == opts_fp &&
            existing.wsr.size() <= samples.size())
            cache.wsr = existing.wsr;
    }
    if (stats)
        stats->cached += static_cast<int>(cache.wsr.size());

    const std::size_t total = samples.size();
    while (cache.wsr.size() < total) {
        const std::size_t begin = cache.wsr.size();
        const std::size_t end = std::min(total, begin + 128);
        std::vector<double> chunk(end - begin);
        parallel_for(static_cast<int>(begin), static_cast<int>(end), jobs, [&](int i) {
            const Sample& s = samples[static_cast<std::size_t>(i)];
            chunk[static_cast<std::size_t>(i) - begin] =
                wmmse_solve(s.H, s.alpha, s.noise_power, s.power_budget, opts)
                    .objective_trace.back();
        });
        cache.wsr.insert(cache.wsr.end(), chunk.begin(), chunk.end());
        save_wmmse_cache(cache_path, cache, opts);
        if (stats)
            stats->computed += static_cast<int>(end - begin);
    }
    return cache.wsr;
}

// --- commands --------------------------------------------------------------------

struct GenStats {
    int train_samples = 0;
    int eval_samples = 0;
    RefStats refs;
};

inline GenStats run_gen(const ExperimentConfig& cfg) {
    write_resolved_config(cfg);
    GenStats stats;

    const std::uint64_t train_seed = Rng(cfg.seed).spawn(0xDA7A).seed();
    const std::uint64_t eval_seed = Rng(cfg.seed).spawn(0xE7A1).seed();

    const Dataset train_set =
        generate_dataset(train_seed, cfg.instance.n, cfg.instance.k, cfg.gen.num_train_samples,
                         cfg.geometry, cfg.instance.snr_edge_db, cfg.instance.power_budget,
                         cfg.gen.weight_law, cfg.gen.pf_replay);
    save_dataset(train_set, paths::train_set(cfg));
    stats.train_samples = static_cast<int>(train_set.samples.size());

    if (cfg.gen.num_eval_samples > 0) {
        const Dataset eval_set =
            generate_dataset(eval_seed, cfg.instance.n, cfg.instance.k, cfg.gen.num_eval_samples,
                             cfg.geometry, cfg.instance.snr_edge_db, cfg.instance.power_budget,
                             cfg.gen.weight_law, cfg.gen.pf_replay);
        save_dataset(eval_set, paths::eval_set(cfg));
        stats.eval_samples = static_cast<int>(eval_set.samples.size());
        if (cfg.gen.wmmse_reference)
            ensure_wmmse_references(eval_set.samples, paths::eval_set(cfg), paths::eval_refs(cfg),
                                    cfg.wmmse, cfg.jobs, &stats.refs);
    }
    if (cfg.gen.train_reference)
        ensure_wmmse_references(train_set.samples, paths::train_set(cfg), paths::train_refs(cfg),
                                cfg.wmmse, cfg.jobs, &stats.refs);
    return stats;
}

inline void write_history_csv(const std::string& path, const std::vector<EpochStats>& history) {
    CsvWriter csv("epoch,mean_loss,normalized_wsr");
    for (const auto& row : history)
        csv.row(row.epoch, row.mean_loss, row.normalized_wsr);
    csv.save(path);
}

inline std::vector<EpochStats> read_history_csv(const std::string& path) {
    std::vector<EpochStats> rows;
    std::ifstream in(path);
    require(in.good(), "read_history_csv: cannot open " + path);
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#')
            continue;
        EpochStats row;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        row.epoch = std::stoi(line.substr(0, c1));
        row.mean_loss = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        row.normalized_wsr = std::stod(line.substr(c2 + 1));
        rows.push_back(row);
    }
    return rows;
}

struct TrainStats {
    int epochs_run = 0;
    double final_loss = 0.0;
    double final_normalized_wsr = 0.0;
};

inline TrainStats run_train(const ExperimentConfig& cfg, bool resume = false) {
    write_resolved_config(cfg);
    const Dataset train_set = load_dataset(paths::train_set(cfg));
    Dataset eval_set;
    std::vector<double> eval_refs;
    if (std::filesystem::exists(paths::eval_set(cfg))) {
        eval_set = load_dataset(paths::eval_set(cfg));
        eval_refs = ensure_wmmse_references(eval_set.samples, paths::eval_set(cfg),
                                            paths::eval_refs(cfg), cfg.wmmse, cfg.jobs);
    }

    std::optional<TrainSnapshot> snapshot;
    std::vector<EpochStats> history;
    if (resume && std::filesystem::exists(paths::checkpoint(cfg))) {
        const Checkpoint ck = load_checkpoint(paths::checkpoint(cfg));
        if (ck.has_trainer) {
            snapshot = TrainSnapshot{ck.params, ck.opt, ck.next_epoch};
            if (std::filesystem::exists(paths::history(cfg))) {
                for (const auto& row : read_history_csv(paths::history(cfg)))
                    if (row.epoch <= ck.next_epoch)
                        history.push_back(row);
            }
        }
    }

    const auto callback = [&](const EpochStats& stats, const NetParams& params,
                              const OptimizerState& opt) {
        history.push_back(stats);
        save_checkpoint(paths::checkpoint(cfg), cfg.net, params, &opt, stats.epoch);
        write_history_csv(paths::history(cfg), history);
    };

    const TrainResult result =
        train(train_set.samples, eval_set.samples, eval_refs, cfg.net, cfg.train,
              snapshot ? &*snapshot : nullptr, callback);

    TrainStats stats;
    stats.epochs_run = static_cast<int>(result.history.size());
    if (!history.empty()) {
        stats.final_loss = history.back().mean_loss;
        stats.final_normalized_wsr = history.back().normalized_wsr;
    }
    return stats;
}

// Builds a policy by name; "<name>_srm" marks the episode weight-freeze mode
// and maps to the same precoder policy.
inline PrecoderPolicy policy_by_name(const std::string& raw_name, const ExperimentConfig& cfg,
                                     const Checkpoint* ck) {
    std::string name = raw_name;
    if (name.size() > 4 && name.ends_with("_srm"))
        name = name.substr(0, name.size() - 4);
    if (name == "net") {
        require(ck != nullptr, "policy 'net' needs a checkpoint");
        return make_net_policy(ck->params, ck->net);
    }
    if (name == "wmmse")
        return make_wmmse_policy(cfg.wmmse);
    if (name == "mrt")
        return make_mrt_policy();
    if (name == "zf")
        return make_zf_policy();
    throw std::invalid_argument("unknown policy: " + raw_name);
}

inline Json run_eval(const ExperimentConfig& cfg, const std::string& checkpoint_path) {
    write_resolved_config(cfg);
    const Dataset eval_set = load_dataset(paths::eval_set(cfg));
    const std::vector<double> refs = ensure_wmmse_references(
        eval_set.samples, paths::eval_set(cfg), paths::eval_refs(cfg), cfg.wmmse, cfg.jobs);

    std::optional<Checkpoint> ck;
    if (std::filesystem::exists(checkpoint_path))
        ck = load_checkpoint(checkpoint_path);

    Json metrics;
    metrics["config_fingerprint"] = config_fingerprint(cfg);
    metrics["seed"] = cfg.seed;
    metrics["version"] = kVersion;
    metrics["eval_samples"] = eval_set.samples.size();
    if (ck)
        metrics["parameter_count"] = ck->params.parameter_count();

    Json per_policy;
    for (const std::string& name : cfg.eval.policies) {
        if (name == "zf" && eval_set.k > eval_set.n) {
            per_policy[name] = Json{{"skipped", "needs K <= N"}};
            continue;
        }
        if (name == "net" && !ck) {
            per_policy[name] = Json{{"skipped", "no checkpoint at " + checkpoint_path}};
            continue;
        }
        const double value =
            normalized_wsr(policy_by_name(name, cfg, ck ? &*ck : nullptr), eval_set.samples, refs);
        per_policy[name] = value;
    }
    metrics["normalized_wsr"] = per_policy;

    Json sweeps_json = Json::array();
    for (const SweepConfig& sweep : cfg.eval.sweeps) {
        CsvWriter csv("axis,value,policy,mean,ci_half_width,num_samples,note");
        Json sweep_json{{"axis", to_string(sweep.axis)}, {"points", Json::array()}};
        for (const std::string& policy_name : sweep.policies) {
            if (sweep.axis == SweepAxis::train_samples) {
                // handled by the sample-complexity sweep below
                continue;
            }
            SweepSettings settings;
            settings.axis = sweep.axis;
            settings.values = sweep.values;
            settings.base_n = cfg.instance.n;
            settings.base_k = cfg.instance.k;
            settings.snr_edge_db = cfg.instance.snr_edge_db;
            settings.power_budget = cfg.instance.power_budget;
            settings.geometry = cfg.geometry;
            settings.num_samples = sweep.num_samples;
            settings.seed = Rng(cfg.seed).spawn(0x53EE9).seed();
            settings.wmmse = cfg.wmmse;

            // ZF is undefined past K = N; evaluate the valid prefix and note the rest.
            std::vector<double> valid;
            std::vector<double> skipped;
            for (double v : sweep.values) {
                const int n = sweep.axis == SweepAxis::num_antennas ? static_cast<int>(v)
                                                                    : cfg.instance.n;
                const int k = sweep.axis == SweepAxis::num_ues ? static_cast<int>(v)
                                                               : cfg.instance.k;
                const bool zf_invalid = (policy_name == "zf" && k > n);
                (zf_invalid ? skipped : valid).push_back(v);
            }
            settings.values = valid;
            const SweepResult result = generalization_sweep(
                policy_by_name(policy_name, cfg, ck ? &*ck : nullptr), settings);
            for (const auto& p : result.points) {
                csv.row(to_string(sweep.axis), p.axis_value, policy_name, p.mean,
                        p.ci_half_width, p.num_samples, "");
                sweep_json["points"].push_back(Json{{"value", p.axis_value},
                                                    {"policy", policy_name},
                                                    {"mean", p.mean},
                                                    {"ci_half_width", p.ci_half_width}});
            }
            for (double v : skipped)
                csv.row(to_string(sweep.axis), v, policy_name, "", "", 0, "skipped: needs K <= N");
        }
        csv.save(cfg.output_dir + "/sweep_" + to_string(sweep.axis) + ".csv");
        sweeps_json.push_back(std::move(sweep_json));
    }
    metrics["sweeps"] = sweeps_json;

    write_text_file(paths::metrics(cfg), metrics.dump(2) + "\n");
    return metrics;
}

// Sample-complexity protocol: retrains on nested prefixes of the training set
// and reports the held-out normalized WSR per training-set size.
inline SweepResult sample_complexity_sweep(const ExperimentConfig& cfg,
                                           const std::vector<double>& sizes) {
    const Dataset train_set = load_dataset(paths::train_set(cfg));
    const Dataset eval_set = load_dataset(paths::eval_set(cfg));
    const std::vector<double> refs = ensure_wmmse_references(
        eval_set.samples, paths::eval_set(cfg), paths::eval_refs(cfg), cfg.wmmse, cfg.jobs);

    SweepResult result;
    result.axis = SweepAxis::train_samples;
    for (double size : sizes) {
        const auto count = static_cast<std::size_t>(size);
        require(count >= 1 && count <= train_set.samples.size(),
                "sample_complexity_sweep: size outside the training set");
        std::vector<Sample> subset(train_set.samples.begin(),
                                   train_set.samples.begin() + static_cast<long>(count));
        const TrainResult r = train(subset, eval_set.samples, refs, cfg.net, cfg.train);
        result.points.push_back(
            {size, r.history.empty() ? 0.0 : r.history.back().normalized_wsr, 0.0,
             static_cast<int>(eval_set.samples.size())});
    }
    return result;
}

inline Json run_pf(const ExperimentConfig& cfg, const std::string& checkpoint_path) {
    write_resolved_config(cfg);
    std::optional<Checkpoint> ck;
    if (std::filesystem::exists(checkpoint_path))
        ck = load_checkpoint(checkpoint_path);

    // One shared set of episodes makes the policy comparison paired.
    std::vector<EpisodeChannels> episodes;
    episodes.reserve(static_cast<std::size_t>(cfg.pf.num_episodes));
    for (int e = 0; e < cfg.pf.num_episodes; ++e) {
        Rng rng = Rng(cfg.seed).spawn(0xEF15 + static_cast<std::uint64_t>(e));
        const auto base = sample_channel(rng, cfg.instance.n, cfg.instance.k, cfg.geometry,
                                         cfg.instance.snr_edge_db, cfg.instance.power_budget);
        episodes.push_back(evolve_episode(rng, base, cfg.pf.num_slots, cfg.pf.correlation));
    }

    Json metrics;
    metrics["config_fingerprint"] = config_fingerprint(cfg);
    metrics["seed"] = cfg.seed;
    metrics["episodes"] = cfg.pf.num_episodes;
    metrics["num_slots"] = cfg.pf.num_slots;
    metrics["correlation"] = cfg.pf.correlation;
    metrics["pooling"] = "per-UE average rates pooled across episodes";

    Json per_policy;
    for (const std::string& name : cfg.pf.policies) {
        const PrecoderPolicy policy = policy_by_name(name, cfg, ck ? &*ck : nullptr);
        PfOptions opts;
        opts.weight_cap = cfg.pf.weight_cap;
        opts.update_weights = !name.ends_with("_srm");

        std::vector<EpisodeTrace> traces(episodes.size());
        parallel_for(0, static_cast<int>(episodes.size()), cfg.jobs, [&](int e) {
            traces[static_cast<std::size_t>(e)] =
                run_pf_episode(episodes[static_cast<std::size_t>(e)], policy, opts, name);
        });

        const auto cdf = rate_cdf(traces);
        CsvWriter csv("rate,cdf");
        csv.comment("policy: " + name);
        csv.comment("per-UE average rates pooled across " + std::to_string(episodes.size()) +
                    " episodes");
        for (const auto& p : cdf)
            csv.row(p.value, p.level);
        csv.save(cfg.output_dir + "/cdf_" + name + ".csv");

        std::vector<double> pooled;
        for (const auto& tr : traces)
            for (Eigen::Index u = 0; u < tr.average_rate.size(); ++u)
                pooled.push_back(tr.average_rate(u));
        std::sort(pooled.begin(), pooled.end());
        auto quantile = [&](double q) {
            const double pos = q * static_cast<double>(pooled.size() - 1);
            const auto lo = static_cast<std::size_t>(pos);
            if (lo + 1 >= pooled.size())
                return pooled.back();
            const double frac = pos - static_cast<double>(lo);
            return pooled[lo] * (1.0 - frac) + pooled[lo + 1] * frac;
        };
        double mean = 0.0;
        for (double v : pooled)
            mean += v;
        mean /= static_cast<double>(pooled.size());
        int capped = 0;
        for (const auto& tr : traces)
            capped += tr.capped_weights;
        per_policy[name] = Json{{"p5", quantile(0.05)},
                                {"median", quantile(0.5)},
                                {"mean", mean},
                                {"capped_weights", capped}};

        if (cfg.pf.save_traces) {
            CsvWriter tcsv("episode,slot,ue,weight,rate");
            for (std::size_t e = 0; e < traces.size(); ++e)
                for (int t = 0; t < traces[e].rates.rows(); ++t)
                    for (int u = 0; u < traces[e].rates.cols(); ++u)
                        tcsv.row(e, t + 1, u, traces[e].weights(t, u), traces[e].rates(t, u));
            tcsv.save(cfg.output_dir + "/episodes_" + name + ".csv");
        }
    }
    metrics["policies"] = per_policy;
    write_text_file(paths::pf_metrics(cfg), metrics.dump(2) + "\n");
    return metrics;
}

struct OracleRow {
    std::string family;
    int n = 0;
    int k = 0;
    int dimension = 0;
    double residual = 0.0;
};

struct OracleReport {
    std::vector<OracleRow> rows;
    bool residual_gate_passed = true;
};

inline OracleReport run_oracle(const ExperimentConfig& cfg) {
    OracleReport report;
    Rng rng(cfg.seed);
    const std::vector<ConstraintFamily> families = {
        {ConstraintKind::unitary_left, cfg.oracle.n, cfg.oracle.k, cfg.oracle.num_group_samples},
        {ConstraintKind::unitary_absorb, cfg.oracle.n, cfg.oracle.k, cfg.oracle.num_group_samples},
        {ConstraintKind::perm_diag, 1, cfg.oracle.perm_k, cfg.oracle.num_group_samples},
        {ConstraintKind::perm_pair, 1, cfg.oracle.perm_k, cfg.oracle.num_group_samples},
    };
    for (const auto& family : families) {
        Rng family_rng = rng.spawn(static_cast<std::uint64_t>(family.kind));
        const SolutionSpace space = solve_commutant(family, family_rng);
        report.rows.push_back({to_string(family.kind), family.n, family.k, space.dimension,
                               space.residual});
        if (space.residual >= 1e-8)
            report.residual_gate_passed = false;
    }
    return report;
}

inline Json to_json(const OracleReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back(Json{{"family", row.family},
                            {"n", row.n},
                            {"k", row.k},
                            {"dimension", row.dimension},
                            {"residual", row.residual}});
    return Json{{"rows", rows}, {"residual_gate_passed", r.residual_gate_passed}};
}

struct GradcheckReport {
    std::vector<double> max_rel_err_per_point;
    double worst = 0.0;
    bool passed = true;
};

inline GradcheckReport run_gradcheck(const ExperimentConfig& cfg) {
    NetConfig net = cfg.net;
    net.hidden_channels = cfg.gradcheck.hidden_channels;

    GradcheckReport report;
    for (int point = 0; point < cfg.gradcheck.num_points; ++point) {
        Rng rng = Rng(cfg.seed).spawn(0x96AD + static_cast<std::uint64_t>(point));
        const Dataset batch = generate_dataset(
            rng.spawn(1).seed(), cfg.gradcheck.n, cfg.gradcheck.k, cfg.gradcheck.batch_size,
            cfg.geometry, cfg.instance.snr_edge_db, cfg.instance.power_budget,
            WeightLaw::dirichlet);
        Rng init_rng = rng.spawn(2);
        const NetParams params = NetParams::random_init(net, init_rng);
        const GradReport gr = gradient_check(batch.samples, params, net, cfg.gradcheck.step);
        report.max_rel_err_per_point.push_back(gr.max_rel_err);
        report.worst = std::max(report.worst, gr.max_rel_err);
    }
    report.passed = report.worst < cfg.gradcheck.tolerance;
    return report;
}

} // namespace wsrp

#endif // WSRP_EXPERIMENT_HPP
