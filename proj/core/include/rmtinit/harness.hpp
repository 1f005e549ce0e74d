#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmtinit/config.hpp"
#include "rmtinit/dataset.hpp"
#include "rmtinit/painleve.hpp"
#include "rmtinit/trainer.hpp"

namespace rmtinit {

struct RunRow {
    int class_count = 0;
    std::string initializer;
    int run = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    double accuracy = 0.0;  // test accuracy
    int epochs = 0;
    double final_error = 0.0;
    bool converged = false;
    std::string stop_reason;
    std::string error;  // empty when ok
};

struct AggregateRow {
    int class_count = 0;
    std::string initializer;
    double mean_accuracy = 0.0;
    double max_accuracy = 0.0;
    double mean_epochs = 0.0;
    double max_epochs = 0.0;
    int run_count = 0;  // completed runs only
};

struct PreparedData {
    LabeledDataset train;
    LabeledDataset test;
};

/// Load or generate, split, PCA, then standardize with training statistics.
PreparedData prepare_data(const ExperimentConfig& cfg, std::optional<int> class_limit = std::nullopt);

struct ExperimentResult {
    std::vector<RunRow> runs;  // (initializer, run) order
    std::vector<AggregateRow> aggregates;
    std::vector<std::string> warnings;
    double chance_level = 0.0;
};

ExperimentResult run_experiment(const PainleveSolution& sol, const ExperimentConfig& cfg,
                                std::optional<int> class_limit = std::nullopt);
ExperimentResult run_experiment(const PainleveSolution& sol, const ExperimentConfig& cfg, const PreparedData& data);

/// Mean/max over completed runs, one row per (class_count, initializer) in first-seen order.
std::vector<AggregateRow> aggregate(std::span<const RunRow> runs);

void write_runs_csv(std::span<const RunRow> rows, std::ostream& out);
void write_aggregate_csv(std::span<const AggregateRow> rows, std::ostream& out);
std::vector<RunRow> read_runs_csv(std::istream& in);

struct SweepRow {
    AggregateRow aggregate;
    double rmt_gap = 0.0;  // rmt mean accuracy minus best baseline mean, per class count
};

struct SweepResult {
    std::vector<RunRow> runs;
    std::vector<SweepRow> rows;
    double gap_trend = 0.0;  // least-squares slope of rmt_gap against class_count
};

SweepResult sweep_classes(const PainleveSolution& sol, const ExperimentConfig& cfg, std::span<const int> class_counts);
void write_sweep_csv(const SweepResult& sweep, std::ostream& out);

/// log <N_m> over (n, ratio), full-line windows.
void emit_phase_diagram(const PainleveSolution& sol, std::span<const int> n_list, std::span<const double> ratio_grid,
                        std::ostream& out);

/// Writes runs.csv and aggregate.csv into dir (created if needed).
void write_experiment_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace rmtinit
