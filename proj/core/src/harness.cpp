#include "rmtinit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "rmtinit/landscape.hpp"
#include "rmtinit/network.hpp"
#include "rmtinit/parallel.hpp"
#include "rmtinit/pca.hpp"
#include "rmtinit/rmt_init.hpp"

namespace rmtinit {

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Applies the train-set mean/sd to another dataset, so test features live in
// the same coordinates the network was initialized and trained in.
LabeledDataset standardize_like(const LabeledDataset& ds, const LabeledDataset& reference) {
    LabeledDataset out = ds;
    const Eigen::RowVectorXd mean = reference.features.colwise().mean();
    Eigen::RowVectorXd sd(reference.dimension());
    for (Eigen::Index j = 0; j < reference.dimension(); ++j) {
        const double var = (reference.features.col(j).array() - mean(j)).square().mean();
        sd(j) = std::sqrt(var);
    }
    for (Eigen::Index j = 0; j < out.dimension(); ++j) {
        out.features.col(j).array() -= mean(j);
        if (sd(j) > 0) out.features.col(j) /= sd(j);
        else out.features.col(j).setZero();
    }
    out.preprocessing_log.push_back("standardize(train statistics)");
    out.refresh();
    return out;
}

std::vector<Eigen::MatrixXd> baseline_layers(const std::string& name, Eigen::Index input_dim,
                                             const std::vector<int>& widths, std::uint64_t seed) {
    std::vector<Eigen::MatrixXd> layers;
    Eigen::Index fan_in = input_dim;
    for (std::size_t l = 0; l < widths.size(); ++l) {
        const auto s = derive_seed(seed, static_cast<std::uint64_t>(l));
        layers.push_back(name == "xavier" ? xavier_init(fan_in, widths[l], s) : nguyen_widrow_init(fan_in, widths[l], s));
        fan_in = widths[l];
    }
    return layers;
}

}  // namespace

PreparedData prepare_data(const ExperimentConfig& cfg, std::optional<int> class_limit) {
    cfg.validate();
    LabeledDataset full;
    if (cfg.dataset_source == "synth") {
        const int classes = class_limit ? *class_limit : cfg.synth_classes;
        if (class_limit && *class_limit > cfg.synth_classes)
            throw std::invalid_argument("class count " + std::to_string(*class_limit) + " exceeds synth.classes");
        full = synth_generate(cfg.synth_classes, cfg.synth_dim, cfg.synth_per_class, cfg.synth_separation,
                              derive_seed(cfg.seed, "synth"));
        if (classes < cfg.synth_classes) full = restrict_classes(full, classes);
    } else {
        full = cfg.dataset_source == "directory" ? load_directory(cfg.dataset_path, cfg.dataset_format)
                                                 : read_csv_dataset(std::filesystem::path(cfg.dataset_path));
        if (class_limit) {
            if (*class_limit > full.class_count)
                throw std::invalid_argument("class count " + std::to_string(*class_limit) + " exceeds the " +
                                            std::to_string(full.class_count) + " classes of " + cfg.dataset_path);
            full = restrict_classes(full, *class_limit);
        }
    }

    auto [train, test] = split(full, cfg.train_fraction, derive_seed(cfg.seed, "split"));
    if (cfg.pca_k > 0) {
        const PcaBasis basis = fit_pca(cfg.pca_fit_on_all ? full : train, cfg.pca_k);
        train = project(basis, train);
        test = project(basis, test);
    }
    LabeledDataset std_train = standardize(train);
    LabeledDataset std_test = standardize_like(test, train);
    return {std::move(std_train), std::move(std_test)};
}

ExperimentResult run_experiment(const PainleveSolution& sol, const ExperimentConfig& cfg,
                                std::optional<int> class_limit) {
    return run_experiment(sol, cfg, prepare_data(cfg, class_limit));
}

ExperimentResult run_experiment(const PainleveSolution& sol, const ExperimentConfig& cfg, const PreparedData& data) {
    cfg.validate();
    ExperimentResult result;
    const int classes = data.train.class_count;
    result.chance_level = 1.0 / classes;
    const std::vector<int> widths = cfg.resolved_widths(classes);
    if (widths.back() != classes)
        throw std::invalid_argument("last layer width " + std::to_string(widths.back()) +
                                    " does not match the class count " + std::to_string(classes));

    // The deterministic RMT weights do not depend on the run, so fit them once.
    std::optional<Network> rmt_net;
    std::string rmt_error;
    const bool wants_rmt =
        std::find(cfg.initializers.begin(), cfg.initializers.end(), "rmt") != cfg.initializers.end();
    if (wants_rmt && cfg.init.mode == DrawMode::deterministic) {
        try {
            const auto layers = init_network(sol, data.train, widths, cfg.init);
            for (const auto& l : layers)
                for (const auto& w : l.warnings) result.warnings.push_back(w);
            rmt_net = network_from(layers, cfg.output);
        } catch (const std::exception& e) {
            rmt_error = e.what();
        }
    }

    const std::size_t total = cfg.initializers.size() * static_cast<std::size_t>(cfg.runs);
    result.runs.resize(total);
    parallel_for(total, cfg.jobs, [&](std::size_t slot) {
        const auto& name = cfg.initializers[slot / cfg.runs];
        const int run = static_cast<int>(slot % cfg.runs);
        RunRow& row = result.runs[slot];
        row.class_count = classes;
        row.initializer = name;
        row.run = run;
        row.seed = derive_seed(derive_seed(cfg.seed, name), static_cast<std::uint64_t>(run));
        try {
            Network net;
            if (name == "rmt") {
                if (cfg.init.mode == DrawMode::deterministic) {
                    if (!rmt_net) throw std::runtime_error(rmt_error);
                    net = *rmt_net;
                } else {
                    InitConfig ic = cfg.init;
                    ic.seed = row.seed;
                    net = network_from(init_network(sol, data.train, widths, ic), cfg.output);
                }
            } else {
                net.layers = baseline_layers(name, data.train.dimension(), widths, row.seed);
                net.output = cfg.output;
            }
            const TrainReport rep = train(net, data.train, cfg.train, row.seed);
            row.epochs = rep.epochs;
            row.final_error = rep.final_error;
            row.converged = rep.converged;
            row.stop_reason = std::string(to_string(rep.stop_reason));
            row.accuracy = evaluate(net, data.test);
            row.ok = true;
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
    });
    result.aggregates = aggregate(result.runs);
    return result;
}

std::vector<AggregateRow> aggregate(std::span<const RunRow> runs) {
    std::vector<AggregateRow> out;
    std::vector<std::vector<const RunRow*>> members;
    for (const auto& r : runs) {
        auto it = std::find_if(out.begin(), out.end(), [&](const AggregateRow& a) {
            return a.class_count == r.class_count && a.initializer == r.initializer;
        });
        if (it == out.end()) {
            out.push_back({r.class_count, r.initializer, 0, 0, 0, 0, 0});
            members.emplace_back();
            it = out.end() - 1;
        }
        if (r.ok) members[it - out.begin()].push_back(&r);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto& a = out[i];
        const auto& m = members[i];
        a.run_count = static_cast<int>(m.size());
        if (m.empty()) continue;
        double acc = 0, ep = 0;
        a.max_accuracy = m.front()->accuracy;
        a.max_epochs = m.front()->epochs;
        for (const RunRow* r : m) {
            acc += r->accuracy;
            ep += r->epochs;
            a.max_accuracy = std::max(a.max_accuracy, r->accuracy);
            a.max_epochs = std::max<double>(a.max_epochs, r->epochs);
        }
        a.mean_accuracy = acc / static_cast<double>(m.size());
        a.mean_epochs = ep / static_cast<double>(m.size());
    }
    return out;
}

void write_runs_csv(std::span<const RunRow> rows, std::ostream& out) {
    out << "class_count,initializer,run,seed,status,accuracy,epochs,final_error,converged,stop_reason,error\n";
    for (const auto& r : rows) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        out << r.class_count << ',' << r.initializer << ',' << r.run << ',' << r.seed << ','
            << (r.ok ? "ok" : "failed") << ',' << fmt(r.accuracy) << ',' << r.epochs << ',' << fmt(r.final_error)
            << ',' << (r.converged ? 1 : 0) << ',' << r.stop_reason << ',' << err << '\n';
    }
}

std::vector<RunRow> read_runs_csv(std::istream& in) {
    std::vector<RunRow> rows;
    std::string line;
    if (!std::getline(in, line)) return rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() == 10) f.emplace_back();
        if (f.size() != 11) throw std::runtime_error("runs.csv: malformed row '" + line + "'");
        RunRow r;
        r.class_count = std::stoi(f[0]);
        r.initializer = f[1];
        r.run = std::stoi(f[2]);
        r.seed = std::stoull(f[3]);
        r.ok = f[4] == "ok";
        r.accuracy = std::strtod(f[5].c_str(), nullptr);
        r.epochs = std::stoi(f[6]);
        r.final_error = std::strtod(f[7].c_str(), nullptr);
        r.converged = f[8] == "1";
        r.stop_reason = f[9];
        r.error = f[10];
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_aggregate_csv(std::span<const AggregateRow> rows, std::ostream& out) {
    out << "class_count,initializer,mean_accuracy,max_accuracy,mean_epochs,max_epochs,run_count\n";
    for (const auto& a : rows)
        out << a.class_count << ',' << a.initializer << ',' << fmt(a.mean_accuracy) << ',' << fmt(a.max_accuracy)
            << ',' << fmt(a.mean_epochs) << ',' << fmt(a.max_epochs) << ',' << a.run_count << '\n';
}

SweepResult sweep_classes(const PainleveSolution& sol, const ExperimentConfig& cfg, std::span<const int> class_counts) {
    if (class_counts.empty()) throw std::invalid_argument("sweep_classes: class_counts must not be empty");
    for (int k : class_counts)
        if (k < 2) throw std::invalid_argument("sweep_classes: class counts must be >= 2");

    SweepResult sweep;
    std::vector<double> xs, gaps;
    for (int k : class_counts) {
        const ExperimentResult r = run_experiment(sol, cfg, k);
        sweep.runs.insert(sweep.runs.end(), r.runs.begin(), r.runs.end());
        double rmt = NAN, best_other = -INFINITY;
        for (const auto& a : r.aggregates) {
            if (a.initializer == "rmt") rmt = a.mean_accuracy;
            else best_other = std::max(best_other, a.mean_accuracy);
        }
        const double gap = std::isfinite(rmt) && std::isfinite(best_other) ? rmt - best_other : 0.0;
        for (const auto& a : r.aggregates) sweep.rows.push_back({a, gap});
        xs.push_back(k);
        gaps.push_back(gap);
    }
    if (xs.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += gaps[i];
        mx /= xs.size();
        my /= xs.size();
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (gaps[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        sweep.gap_trend = sxx > 0 ? sxy / sxx : 0.0;
    }
    return sweep;
}

void write_sweep_csv(const SweepResult& sweep, std::ostream& out) {
    out << "class_count,initializer,mean_accuracy,max_accuracy,mean_epochs,max_epochs,run_count,rmt_gap,gap_trend\n";
    for (const auto& s : sweep.rows) {
        const auto& a = s.aggregate;
        out << a.class_count << ',' << a.initializer << ',' << fmt(a.mean_accuracy) << ',' << fmt(a.max_accuracy)
            << ',' << fmt(a.mean_epochs) << ',' << fmt(a.max_epochs) << ',' << a.run_count << ',' << fmt(s.rmt_gap)
            << ',' << fmt(sweep.gap_trend) << '\n';
    }
}

void emit_phase_diagram(const PainleveSolution& sol, std::span<const int> n_list, std::span<const double> ratio_grid,
                        std::ostream& out) {
    const auto rows = minima_sweep(sol, n_list, ratio_grid);
    write_minima_csv(rows, out);
}

void write_experiment_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream runs(dir / "runs.csv");
    if (!runs) throw std::runtime_error("cannot write " + (dir / "runs.csv").string());
    write_runs_csv(result.runs, runs);
    std::ofstream agg(dir / "aggregate.csv");
    if (!agg) throw std::runtime_error("cannot write " + (dir / "aggregate.csv").string());
    write_aggregate_csv(result.aggregates, agg);
}

}  // namespace rmtinit
