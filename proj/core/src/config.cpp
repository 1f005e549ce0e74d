#include "rmtinit/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rmtinit/parallel.hpp"

namespace rmtinit {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string bad(std::string_view key, std::string_view value) {
    return "invalid value '" + std::string(value) + "' for " + std::string(key);
}

double to_double(std::string_view key, std::string_view v) {
    const std::string s(trim(v));
    std::size_t used = 0;
    double x = 0;
    try {
        x = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument(bad(key, v));
    }
    if (used != s.size() || !std::isfinite(x)) throw std::invalid_argument(bad(key, v));
    return x;
}

long long to_int(std::string_view key, std::string_view v) {
    const auto s = trim(v);
    long long x = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument(bad(key, v));
    return x;
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
    const auto s = trim(v);
    std::uint64_t x = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument(bad(key, v));
    return x;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
    return out;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::vector<std::string> split_list(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto pos = s.find(sep, start);
        const auto piece = trim(s.substr(start, pos == std::string_view::npos ? s.size() - start : pos - start));
        if (!piece.empty()) out.emplace_back(piece);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<double> parse_double_list(std::string_view s) {
    std::vector<double> out;
    for (const auto& p : split_list(s)) out.push_back(to_double("list", p));
    return out;
}

std::vector<int> parse_int_list(std::string_view s) {
    std::vector<int> out;
    for (const auto& p : split_list(s)) out.push_back(static_cast<int>(to_int("list", p)));
    return out;
}

std::vector<int> ExperimentConfig::resolved_widths(int class_count) const {
    std::vector<int> w;
    for (const auto& tok : layer_widths) {
        if (tok == "C" || tok == "c")
            w.push_back(class_count);
        else
            w.push_back(static_cast<int>(to_int("net.layer_widths", tok)));
    }
    return w;
}

void ExperimentConfig::validate() const {
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
    if (initializers.empty()) throw std::invalid_argument("initializers must not be empty");
    for (const auto& name : initializers)
        if (std::find(std::begin(kKnownInitializers), std::end(kKnownInitializers), name) ==
            std::end(kKnownInitializers))
            throw std::invalid_argument("unknown initializer '" + name + "'");
    if (layer_widths.empty()) throw std::invalid_argument("net.layer_widths must not be empty");
    for (int w : resolved_widths(2))
        if (w < 1) throw std::invalid_argument("net.layer_widths entries must be positive");
    if (!(train_fraction > 0 && train_fraction < 1)) throw std::invalid_argument("split.train_fraction must be in (0, 1)");
    if (pca_k < 0) throw std::invalid_argument("pca.k must be >= 0");
    if (dataset_source != "synth" && dataset_source != "directory" && dataset_source != "csv")
        throw std::invalid_argument("dataset.source must be synth, directory or csv");
    if (dataset_source != "synth" && dataset_path.empty())
        throw std::invalid_argument("dataset.path is required for dataset.source=" + dataset_source);
    if (dataset_source == "synth" &&
        (synth_classes < 1 || synth_dim < 1 || synth_per_class < 1 || synth_separation < 0))
        throw std::invalid_argument("synth.* values must be positive");
}

void set_config_value(ExperimentConfig& c, std::string_view key_in, std::string_view value_in) {
    const auto key = trim(key_in);
    const auto v = trim(value_in);
    if (key == "dataset.source") c.dataset_source = std::string(v);
    else if (key == "dataset.path") c.dataset_path = std::string(v);
    else if (key == "dataset.format") {
        if (v == "pgm") c.dataset_format = ImageFormat::pgm;
        else if (v == "csv") c.dataset_format = ImageFormat::csv;
        else throw std::invalid_argument(bad(key, v));
    }
    else if (key == "synth.classes") c.synth_classes = static_cast<int>(to_int(key, v));
    else if (key == "synth.dim") c.synth_dim = static_cast<int>(to_int(key, v));
    else if (key == "synth.per_class") c.synth_per_class = static_cast<int>(to_int(key, v));
    else if (key == "synth.separation") c.synth_separation = to_double(key, v);
    else if (key == "pca.k") c.pca_k = static_cast<int>(to_int(key, v));
    else if (key == "pca.fit_on") {
        if (v == "train") c.pca_fit_on_all = false;
        else if (v == "all") c.pca_fit_on_all = true;
        else throw std::invalid_argument(bad(key, v));
    }
    else if (key == "split.train_fraction") c.train_fraction = to_double(key, v);
    else if (key == "net.layer_widths") c.layer_widths = split_list(v);
    else if (key == "net.output") {
        if (v == "sigmoid") c.output = OutputActivation::sigmoid;
        else if (v == "linear") c.output = OutputActivation::linear;
        else throw std::invalid_argument(bad(key, v));
    }
    else if (key == "initializers") c.initializers = split_list(v);
    else if (key == "runs") c.runs = static_cast<int>(to_int(key, v));
    else if (key == "train.method") c.train.method = parse_train_method(v);
    else if (key == "train.goal") c.train.stop.goal = to_double(key, v);
    else if (key == "train.max_epochs") c.train.stop.max_epochs = static_cast<int>(to_int(key, v));
    else if (key == "train.grad_tol") c.train.stop.grad_tol = to_double(key, v);
    else if (key == "train.batch_size") c.train.batch_size = static_cast<int>(to_int(key, v));
    else if (key == "train.learning_rate") c.train.learning_rate = to_double(key, v);
    else if (key == "train.momentum") c.train.momentum = to_double(key, v);
    else if (key == "seed") c.seed = to_u64(key, v);
    else if (key == "jobs") {
        const auto j = to_int(key, v);
        if (j < 0) throw std::invalid_argument(bad(key, v));
        c.jobs = j == 0 ? default_jobs() : static_cast<unsigned>(j);
    }
    else if (key == "init.mode") c.init.mode = parse_draw_mode(v);
    else if (key == "init.ratio_policy") c.init.ratio_policy = parse_ratio_policy(v);
    else if (key == "init.ratio_grid") c.init.ratio_grid = parse_double_list(v);
    else if (key == "init.ratio") {
        if (v.empty() || v == "auto") c.init.fixed_ratio.reset();
        else c.init.fixed_ratio = to_double(key, v);
    }
    else if (key == "init.seed") c.init.seed = to_u64(key, v);
    else if (key == "output.dir") c.output_dir = std::string(v);
    else throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
}

void apply_override(ExperimentConfig& cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("expected key=value, got '" + std::string(assignment) + "'");
    set_config_value(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

ExperimentConfig parse_config(std::istream& in, const std::string& origin) {
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv(line);
        if (const auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
        sv = trim(sv);
        if (sv.empty()) continue;
        try {
            apply_override(cfg, sv);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open config " + file.string());
    return parse_config(in, file.string());
}

void write_config(const ExperimentConfig& c, std::ostream& out) {
    out << "dataset.source = " << c.dataset_source << "\n";
    if (!c.dataset_path.empty()) out << "dataset.path = " << c.dataset_path << "\n";
    out << "dataset.format = " << (c.dataset_format == ImageFormat::pgm ? "pgm" : "csv") << "\n";
    out << "synth.classes = " << c.synth_classes << "\n";
    out << "synth.dim = " << c.synth_dim << "\n";
    out << "synth.per_class = " << c.synth_per_class << "\n";
    out << "synth.separation = " << fmt(c.synth_separation) << "\n";
    out << "pca.k = " << c.pca_k << "\n";
    out << "pca.fit_on = " << (c.pca_fit_on_all ? "all" : "train") << "\n";
    out << "split.train_fraction = " << fmt(c.train_fraction) << "\n";
    out << "net.layer_widths = " << join(c.layer_widths) << "\n";
    out << "net.output = " << (c.output == OutputActivation::sigmoid ? "sigmoid" : "linear") << "\n";
    out << "initializers = " << join(c.initializers) << "\n";
    out << "runs = " << c.runs << "\n";
    out << "train.method = " << to_string(c.train.method) << "\n";
    out << "train.goal = " << fmt(c.train.stop.goal) << "\n";
    out << "train.max_epochs = " << c.train.stop.max_epochs << "\n";
    out << "train.grad_tol = " << fmt(c.train.stop.grad_tol) << "\n";
    out << "seed = " << c.seed << "\n";
    out << "init.mode = " << to_string(c.init.mode) << "\n";
    out << "init.ratio_policy = " << to_string(c.init.ratio_policy) << "\n";
    out << "init.seed = " << c.init.seed << "\n";
    out << "output.dir = " << c.output_dir << "\n";
}

}  // namespace rmtinit
