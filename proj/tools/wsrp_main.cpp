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
// Command line front end. Subcommands: gen, train, eval, pf, oracle,
// gradcheck. All state flows through the JSON config and explicit flags;
// reruns with the same config and seed reproduce outputs byte for byte in
// single-job mode.

#include "wsrp/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

using namespace wsrp;

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_dir;
    std::optional<int> jobs;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
    auto* opt = cmd->add_option("-c,--config", flags.config_path, "experiment config (JSON)");
    if (config_required)
        opt->required()->check(CLI::ExistingFile);
    else
        opt->check(CLI::ExistingFile);
    cmd->add_option("--seed", flags.seed, "override the config seed");
    cmd->add_option("-o,--output", flags.output_dir, "override the output directory");
    cmd->add_option("-j,--jobs", flags.jobs, "worker threads (default 1, deterministic)");
}

ExperimentConfig resolve(const CommonFlags& flags) {
    ExperimentConfig cfg;
    if (!flags.config_path.empty())
        cfg = load_experiment_config(flags.config_path);
    if (flags.seed) {
        cfg.seed = *flags.seed;
        cfg.train.seed = *flags.seed;
    }
    if (flags.output_dir)
        cfg.output_dir = *flags.output_dir;
    if (flags.jobs) {
        cfg.jobs = *flags.jobs;
        cfg.train.jobs = *flags.jobs;
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted sum rate precoder learning toolkit"};
    app.require_subcommand(1);

    CommonFlags gen_flags, train_flags, eval_flags, pf_flags, oracle_flags, grad_flags;

    auto* gen = app.add_subcommand("gen", "generate datasets and WMMSE reference caches");
    add_common(gen, gen_flags, true);

    auto* tr = app.add_subcommand("train", "train the precoder network");
    add_common(tr, train_flags, true);
    bool resume = false;
    tr->add_flag("--resume", resume, "continue from the checkpoint in the output directory");

    auto* ev = app.add_subcommand("eval", "normalized WSR and generalization sweeps");
    add_common(ev, eval_flags, true);
    std::string eval_checkpoint;
    ev->add_option("--checkpoint", eval_checkpoint, "checkpoint path (default: output dir)");

    auto* pf = app.add_subcommand("pf", "proportional-fairness episodes and rate CDFs");
    add_common(pf, pf_flags, true);
    std::string pf_checkpoint;
    pf->add_option("--checkpoint", pf_checkpoint, "checkpoint path (default: output dir)");

    auto* oracle = app.add_subcommand("oracle", "weight-structure null-space report");
    add_common(oracle, oracle_flags, false);
    bool oracle_json = false;
    oracle->add_flag("--json", oracle_json, "machine-readable JSON output");

    auto* grad = app.add_subcommand("gradcheck", "finite-difference gradient verification");
    add_common(grad, grad_flags, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const ExperimentConfig cfg = resolve(gen_flags);
            const GenStats stats = run_gen(cfg);
            std::cout << "wrote " << stats.train_samples << " training and " << stats.eval_samples
                      << " eval samples to " << cfg.output_dir << "\n"
                      << "wmmse references: " << stats.refs.computed << " computed, "
                      << stats.refs.cached << " cache hits\n";
            return 0;
        }
        if (tr->parsed()) {
            const ExperimentConfig cfg = resolve(train_flags);
            try {
                const TrainStats stats = run_train(cfg, resume);
                std::cout << "trained " << stats.epochs_run << " epochs; final loss "
                          << stats.final_loss << ", held-out normalized WSR "
                          << stats.final_normalized_wsr << "\n"
                          << "checkpoint: " << paths::checkpoint(cfg) << "\n";
            } catch (const TrainingDivergence& e) {
                std::cerr << "training diverged: " << e.what() << "\n"
                          << "last checkpoint: " << paths::checkpoint(cfg) << "\n";
                return 3;
            }
            return 0;
        }
        if (ev->parsed()) {
            const ExperimentConfig cfg = resolve(eval_flags);
            if (eval_checkpoint.empty())
                eval_checkpoint = paths::checkpoint(cfg);
            const Json metrics = run_eval(cfg, eval_checkpoint);
            std::cout << metrics.dump(2) << "\n";
            return 0;
        }
        if (pf->parsed()) {
            const ExperimentConfig cfg = resolve(pf_flags);
            if (pf_checkpoint.empty())
                pf_checkpoint = paths::checkpoint(cfg);
            const Json metrics = run_pf(cfg, pf_checkpoint);
            std::cout << metrics.dump(2) << "\n";
            return 0;
        }
        if (oracle->parsed()) {
            const ExperimentConfig cfg = resolve(oracle_flags);
            const OracleReport report = run_oracle(cfg);
            if (oracle_json) {
                std::cout << to_json(report).dump(2) << "\n";
            } else {
                std::printf("%-16s %4s %4s %10s %12s\n", "family", "n", "k", "dimension",
                            "residual");
                for (const auto& row : report.rows)
                    std::printf("%-16s %4d %4d %10d %12.3e\n", row.family.c_str(), row.n, row.k,
                                row.dimension, row.residual);
            }
            return report.residual_gate_passed ? 0 : 2;
        }
        if (grad->parsed()) {
            const ExperimentConfig cfg = resolve(grad_flags);
            const GradcheckReport report = run_gradcheck(cfg);
            for (std::size_t i = 0; i < report.max_rel_err_per_point.size(); ++i)
                std::cout << "point " << i << ": max relative error "
                          << report.max_rel_err_per_point[i] << "\n";
            std::cout << (report.passed ? "PASS" : "FAIL") << " (worst " << report.worst
                      << ", tolerance " << cfg.gradcheck.tolerance << ")\n";
            return report.passed ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
