/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/
#pragma once

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skmon/reports.hpp"
#include "skmon/runtime.hpp"

namespace skmon {

namespace detail {

struct CliOptions {
    ExperimentConfig config;
    StreamSpec stream;
    std::string algorithm = "dkm";
    std::string input;  // stream file; empty = generate
    std::vector<double> space_coords;
    std::vector<double> cluster_coords;  // cx cy stddev weight, repeated
};

inline void add_common_options(CLI::App& app, CliOptions& opt) {
    app.add_option("--algorithm", opt.algorithm, "Partitioning strategy: kop, sop or dkm")
        ->check(CLI::IsMember({"kop", "sop", "dkm"}));
    app.add_option("--workers", opt.config.workers, "Number of workers (m)");
    app.add_option("--theta", opt.config.theta, "Quadtree subset threshold");
    app.add_option("--gamma1", opt.config.gamma1, "Subset-count multiplier");
    app.add_option("--gamma2", opt.config.gamma2, "Per-subset size ceiling for the hybrid split");
    app.add_option("--kmax", opt.config.shape.k_max, "Largest generated k");
    app.add_option("--warmup", opt.config.shape.warmup_objects, "Warm-up object count");
    app.add_option("--init-subs", opt.config.shape.initial_subscriptions,
                   "Initial subscription count");
    app.add_option("--timestamps", opt.config.shape.timestamps, "Number of simulated timestamps");
    app.add_option("--objects-per-tick", opt.config.shape.objects_per_tick,
                   "Objects broadcast per timestamp");
    app.add_option("--churn-per-tick", opt.config.shape.inserts_per_tick,
                   "Subscription inserts (and deletes) per timestamp");
    app.add_option("--stats-grid", opt.config.stats_grid, "Warm-up statistics grid resolution");
    app.add_option("--worker-grid", opt.config.worker_grid, "Worker grid resolution");
    app.add_option("--seed", opt.config.seed, "Random seed");
    app.add_flag("--deterministic", opt.config.deterministic,
                 "Run workers sequentially for bit-reproducible results");
    app.add_option("--input", opt.input, "Stream file to replay instead of generating");
    app.add_option("--space", opt.space_coords, "Data space: xmin ymin xmax ymax")
        ->expected(4);
    app.add_option("--vocabulary", opt.stream.vocabulary_size, "Generator vocabulary size");
    app.add_option("--zipf", opt.stream.zipf_exponent, "Generator keyword Zipf exponent");
    app.add_option("--min-keywords", opt.stream.min_keywords, "Min keywords per object");
    app.add_option("--max-keywords", opt.stream.max_keywords, "Max keywords per object");
    app.add_option("--cluster", opt.cluster_coords,
                   "Location cluster (cx cy stddev weight); repeatable")
        ->expected(-4);
}

inline void finalize_options(CliOptions& opt) {
    opt.config.algorithm = *parse_algorithm(opt.algorithm);
    opt.config.shape.deletes_per_tick = opt.config.shape.inserts_per_tick;
    if (opt.space_coords.size() == 4) {
        opt.config.space = Rect{{opt.space_coords[0], opt.space_coords[1]},
                                {opt.space_coords[2], opt.space_coords[3]}};
        opt.stream.space = *opt.config.space;
    }
    if (!opt.cluster_coords.empty()) {
        if (opt.cluster_coords.size() % 4 != 0) {
            throw ConfigError("--cluster needs groups of 4 values: cx cy stddev weight");
        }
        opt.stream.clusters.clear();
        for (std::size_t i = 0; i < opt.cluster_coords.size(); i += 4) {
            opt.stream.clusters.push_back({{opt.cluster_coords[i], opt.cluster_coords[i + 1]},
                                           opt.cluster_coords[i + 2],
                                           opt.cluster_coords[i + 3]});
        }
    }
}

inline WorkloadScript load_script(const CliOptions& opt) {
    if (!opt.input.empty()) {
        std::ifstream in(opt.input);
        if (!in) {
            throw ConfigError("cannot open input file: " + opt.input);
        }
        return parse_stream(in, opt.config.shape.warmup_objects);
    }
    return build_workload(opt.config.shape, opt.stream, opt.config.seed);
}

inline std::ostream& open_or_stdout(const std::string& path, std::ofstream& file,
                                    std::ostream& fallback) {
    if (path.empty()) {
        return fallback;
    }
    file.open(path);
    if (!file) {
        throw ConfigError("cannot open output file: " + path);
    }
    return file;
}

}  // namespace detail

/// Entry point of the command-line driver; returns the process exit code.
inline int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Distributed continuous spatial-keyword kNN monitoring harness"};
    app.require_subcommand(1);

    detail::CliOptions opt;
    std::string out_path;
    std::string metrics_path;
    std::string summary_path;
    std::string log_path;
    std::string assignment_path;
    std::int64_t gen_count = -1;

    CLI::App* gen = app.add_subcommand("gen", "Materialize a synthetic stream to a file");
    detail::add_common_options(*gen, opt);
    gen->add_option("--out", out_path, "Output file (default: stdout)");
    gen->add_option("--count", gen_count,
                    "Emit a bare object stream of this size instead of a full workload");

    CLI::App* run = app.add_subcommand("run", "Execute an experiment and emit metrics");
    detail::add_common_options(*run, opt);
    run->add_option("--metrics-out", metrics_path, "Per-timestamp metrics table file");
    run->add_option("--summary-out", summary_path, "Summary JSON file");

    CLI::App* verify = app.add_subcommand("verify", "Run with per-timestamp oracle checking");
    detail::add_common_options(*verify, opt);
    verify->add_option("--summary-out", summary_path, "Summary JSON file");

    CLI::App* report =
        app.add_subcommand("partition-report", "Emit the partition strategy log and assignment");
    detail::add_common_options(*report, opt);
    report->add_option("--log-out", log_path, "Strategy log file (default: stdout)");
    report->add_option("--assignment-out", assignment_path, "Assignment audit file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        detail::finalize_options(opt);

        if (gen->parsed()) {
            std::ofstream file;
            std::ostream& os = detail::open_or_stdout(out_path, file, std::cout);
            if (gen_count >= 0) {
                WorkloadScript script;
                for (int kw = 0; kw < opt.stream.vocabulary_size; ++kw) {
                    script.vocabulary.intern("k" + std::to_string(kw));
                }
                script.warmup = generate_object_stream(
                    opt.stream, static_cast<std::size_t>(gen_count), opt.config.seed);
                serialize_stream(script, os);
            } else {
                const WorkloadScript script =
                    build_workload(opt.config.shape, opt.stream, opt.config.seed);
                serialize_stream(script, os);
            }
            return 0;
        }

        if (run->parsed()) {
            const WorkloadScript script = detail::load_script(opt);
            Engine engine(opt.config, script);
            engine.run_all();
            {
                std::ofstream file;
                std::ostream& os = detail::open_or_stdout(metrics_path, file, std::cout);
                write_metrics_table(os, engine.metrics(), opt.config.workers);
            }
            {
                std::ofstream file;
                std::ostream& os = detail::open_or_stdout(summary_path, file, std::cout);
                os << summary_json(engine).dump(2) << '\n';
            }
            return 0;
        }

        if (verify->parsed()) {
            opt.config.track_history = true;
            const WorkloadScript script = detail::load_script(opt);
            Engine engine(opt.config, script);
            std::size_t mismatches = 0;
            std::size_t checked = 0;
            while (engine.step()) {
                const VerifyReport r = engine.verify_against_oracle();
                checked += r.checked;
                mismatches += r.mismatches.size();
                for (const VerifyMismatch& mm : r.mismatches) {
                    std::cerr << "mismatch: subscription " << mm.id << " at timestamp "
                              << engine.metrics().back().timestamp << '\n';
                }
            }
            std::ofstream file;
            std::ostream& os = detail::open_or_stdout(summary_path, file, std::cout);
            nlohmann::json j = summary_json(engine);
            j["oracle_checked"] = checked;
            j["oracle_mismatches"] = mismatches;
            os << j.dump(2) << '\n';
            return mismatches == 0 ? 0 : 1;
        }

        if (report->parsed()) {
            const WorkloadScript script = detail::load_script(opt);
            Engine engine(opt.config, script);
            {
                std::ofstream file;
                std::ostream& os = detail::open_or_stdout(log_path, file, std::cout);
                if (engine.partition()) {
                    write_strategy_log(os, *engine.partition());
                } else {
                    os << "no partition stage for algorithm "
                       << algorithm_name(opt.config.algorithm) << '\n';
                }
            }
            {
                std::ofstream file;
                std::ostream& os = detail::open_or_stdout(assignment_path, file, std::cout);
                write_assignment_audit(os, engine.initial_assignment());
            }
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const IngestError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace skmon
