#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rmtinit/network.hpp"
#include "rmtinit/rmt_init.hpp"
#include "rmtinit/trainer.hpp"

namespace rmtinit {

/// Everything an experiment needs. Text form is flat `key = value` lines;
/// `#` starts a comment.
struct ExperimentConfig {
    std::string dataset_source = "synth";  // synth | directory | csv
    std::string dataset_path;
    ImageFormat dataset_format = ImageFormat::pgm;

    int synth_classes = 10;
    int synth_dim = 256;
    int synth_per_class = 30;
    double synth_separation = 6.0;

    int pca_k = 64;  // 0 disables PCA
    bool pca_fit_on_all = false;
    double train_fraction = 0.5;

    // Width tokens; "C" stands for the class count of the (restricted) dataset.
    std::vector<std::string> layer_widths{"C", "C"};
    OutputActivation output = OutputActivation::sigmoid;

    std::vector<std::string> initializers{"rmt", "nguyen_widrow", "xavier"};
    int runs = 10;
    TrainOptions train;

    std::uint64_t seed = 1;
    unsigned jobs = 1;
    InitConfig init;
    std::string output_dir = ".";

    std::vector<int> resolved_widths(int class_count) const;
    /// Throws std::invalid_argument on an inconsistent config.
    void validate() const;
};

inline constexpr std::string_view kKnownInitializers[] = {"rmt", "nguyen_widrow", "xavier"};

/// Sets one key. Unknown keys and malformed values throw std::invalid_argument.
void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value);
/// "key=value" form used by --set.
void apply_override(ExperimentConfig& cfg, std::string_view assignment);

ExperimentConfig parse_config(std::istream& in, const std::string& origin = "config");
ExperimentConfig load_config(const std::filesystem::path& file);
void write_config(const ExperimentConfig& cfg, std::ostream& out);

std::vector<std::string> split_list(std::string_view s, char sep = ',');
std::vector<double> parse_double_list(std::string_view s);
std::vector<int> parse_int_list(std::string_view s);

}  // namespace rmtinit
