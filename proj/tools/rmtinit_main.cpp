// rmtinit: command line front end for experiments, sweeps and tables.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rmtinit/config.hpp"
#include "rmtinit/harness.hpp"
#include "rmtinit/painleve.hpp"
#include "rmtinit/parallel.hpp"
#include "rmtinit/rmt_init.hpp"
#include "rmtinit/validation.hpp"

namespace fs = std::filesystem;
using namespace rmtinit;

namespace {

ExperimentConfig build_config(const std::string& path, const std::vector<std::string>& overrides, int jobs,
                              const std::string& out_dir) {
    ExperimentConfig cfg = path.empty() ? ExperimentConfig{} : load_config(path);
    for (const auto& o : overrides) apply_override(cfg, o);
    if (jobs > 0) cfg.jobs = static_cast<unsigned>(jobs);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    cfg.validate();
    return cfg;
}

PainleveSolution table() { return load_or_solve_painleve(painleve_cache_dir_from_env()); }

void print_aggregates(const std::vector<AggregateRow>& rows) {
    std::printf("%-6s %-14s %10s %10s %10s %10s %5s\n", "C", "initializer", "mean_acc", "max_acc", "mean_ep",
                "max_ep", "runs");
    for (const auto& a : rows)
        std::printf("%-6d %-14s %10.4f %10.4f %10.1f %10.0f %5d\n", a.class_count, a.initializer.c_str(),
                    a.mean_accuracy, a.max_accuracy, a.mean_epochs, a.max_epochs, a.run_count);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RMT-based weight initialization: experiments, sweeps and landscape tables"};
    app.require_subcommand(1);
    int jobs = 0;
    app.add_option("--jobs", jobs, "worker threads (0: all cores)");

    std::string config_path, out_dir;
    std::vector<std::string> overrides;

    auto* exp = app.add_subcommand("experiment", "train and compare initializers, write runs.csv and aggregate.csv");
    exp->add_option("config", config_path, "key=value config file")->required()->check(CLI::ExistingFile);
    exp->add_option("--set", overrides, "override a config key (key=value)");
    exp->add_option("--out", out_dir, "output directory (overrides output.dir)");

    std::string classes;
    auto* sweep = app.add_subcommand("sweep", "repeat the experiment over several class counts");
    sweep->add_option("config", config_path, "key=value config file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--classes", classes, "comma separated class counts")->required();
    sweep->add_option("--set", overrides, "override a config key (key=value)");
    sweep->add_option("--out", out_dir, "output directory (overrides output.dir)");

    std::string n_list = "2,16,64,256", ratios = "0.1,0.25,0.5,0.75,1,1.5,2,3,5,10", phase_out = "phase.csv";
    auto* phase = app.add_subcommand("phase", "tabulate log mean minima count over (n, ratio)");
    phase->add_option("--n", n_list, "comma separated dimensions");
    phase->add_option("--ratios", ratios, "comma separated mu/mu_c values");
    phase->add_option("--out", phase_out, "output file ('-' for stdout)");

    std::string tw_out = "-";
    PainleveGridSpec grid;
    auto* tw = app.add_subcommand("tw-table", "dump the tabulated Painleve II / F1 solution as CSV");
    tw->add_option("--out", tw_out, "output file ('-' for stdout)");
    tw->add_option("--t-min", grid.t_min);
    tw->add_option("--t-max", grid.t_max);
    tw->add_option("--points", grid.points);

    std::uint64_t seed = 1;
    auto* val = app.add_subcommand("validate", "run the brute-force oracle checks");
    val->add_option("--seed", seed);

    CLI11_PARSE(app, argc, argv);
    const unsigned njobs = jobs > 0 ? static_cast<unsigned>(jobs) : default_jobs();

    try {
        if (*exp) {
            const auto cfg = build_config(config_path, overrides, static_cast<int>(njobs), out_dir);
            const auto sol = table();
            const auto result = run_experiment(sol, cfg);
            write_experiment_outputs(result, cfg.output_dir);
            for (const auto& w : result.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
            for (const auto& r : result.runs)
                if (!r.ok) std::fprintf(stderr, "run %s/%d failed: %s\n", r.initializer.c_str(), r.run, r.error.c_str());
            print_aggregates(result.aggregates);
            std::printf("chance level %.4f; wrote %s/runs.csv and aggregate.csv\n", result.chance_level,
                        cfg.output_dir.c_str());
        } else if (*sweep) {
            const auto cfg = build_config(config_path, overrides, static_cast<int>(njobs), out_dir);
            const auto counts = parse_int_list(classes);
            const auto sol = table();
            const auto s = sweep_classes(sol, cfg, counts);
            ExperimentResult merged;
            merged.runs = s.runs;
            merged.aggregates = aggregate(s.runs);
            write_experiment_outputs(merged, cfg.output_dir);
            std::ofstream f(fs::path(cfg.output_dir) / "sweep.csv");
            write_sweep_csv(s, f);
            print_aggregates(merged.aggregates);
            std::printf("rmt gap trend %.6g per class; wrote %s/sweep.csv\n", s.gap_trend, cfg.output_dir.c_str());
        } else if (*phase) {
            const auto sol = table();
            const auto ns = parse_int_list(n_list);
            const auto rs = parse_double_list(ratios);
            if (phase_out == "-") {
                emit_phase_diagram(sol, ns, rs, std::cout);
            } else {
                std::ofstream f(phase_out);
                if (!f) throw std::runtime_error("cannot write " + phase_out);
                emit_phase_diagram(sol, ns, rs, f);
                std::printf("wrote %s\n", phase_out.c_str());
            }
        } else if (*tw) {
            const auto sol = load_or_solve_painleve(painleve_cache_dir_from_env(), grid);
            if (tw_out == "-") {
                write_painleve_csv(sol, grid, std::cout);
            } else {
                std::ofstream f(tw_out);
                if (!f) throw std::runtime_error("cannot write " + tw_out);
                write_painleve_csv(sol, grid, f);
            }
        } else if (*val) {
            const auto sol = table();
            int failed = 0;
            for (const auto& c : run_oracle_checks(sol, seed, njobs)) {
                std::printf("%-26s %s  %s\n", c.name.c_str(), c.passed ? "PASS" : "FAIL", c.detail.c_str());
                failed += !c.passed;
            }
            return failed ? 1 : 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
