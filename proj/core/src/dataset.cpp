#include "rmtinit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace rmtinit {

namespace fs = std::filesystem;

std::vector<std::pair<double, double>> feature_ranges(const Eigen::MatrixXd& features) {
    std::vector<std::pair<double, double>> r(static_cast<std::size_t>(features.cols()));
    if (features.rows() == 0) return r;
    for (Eigen::Index j = 0; j < features.cols(); ++j) r[j] = {features.col(j).minCoeff(), features.col(j).maxCoeff()};
    return r;
}

Eigen::MatrixXd LabeledDataset::class_samples(int label) const {
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) rows.push_back(static_cast<Eigen::Index>(i));
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), features.cols());
    for (std::size_t k = 0; k < rows.size(); ++k) out.row(k) = features.row(rows[k]);
    return out;
}

std::vector<int> LabeledDataset::class_sizes() const {
    std::vector<int> sizes(std::max(class_count, 0), 0);
    for (int l : labels) ++sizes.at(l);
    return sizes;
}

void LabeledDataset::refresh() {
    if (static_cast<Eigen::Index>(labels.size()) != features.rows())
        throw std::invalid_argument("dataset: label count does not match sample count");
    if (class_count < 1) throw std::invalid_argument("dataset: class_count must be positive");
    for (int l : labels)
        if (l < 0 || l >= class_count)
            throw std::invalid_argument("dataset: label " + std::to_string(l) + " out of range");
    const auto sizes = class_sizes();
    for (int c = 0; c < class_count; ++c)
        if (sizes[c] == 0) throw std::invalid_argument("dataset: class " + std::to_string(c) + " is empty");
    per_feature_range = feature_ranges(features);
}

LabeledDataset make_dataset(Eigen::MatrixXd features, std::vector<int> labels, int class_count, std::string origin) {
    LabeledDataset ds;
    ds.features = std::move(features);
    ds.labels = std::move(labels);
    ds.class_count = class_count;
    ds.preprocessing_log.push_back(std::move(origin));
    ds.refresh();
    return ds;
}

namespace {

std::string next_pgm_token(std::istream& in, const fs::path& file) {
    std::string tok;
    while (in >> tok) {
        if (tok[0] == '#') {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        return tok;
    }
    throw std::runtime_error("pgm: truncated header in " + file.string());
}

}  // namespace

std::vector<double> read_pgm(const fs::path& file, int& width, int& height) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("pgm: cannot open " + file.string());
    const std::string magic = next_pgm_token(in, file);
    if (magic != "P2" && magic != "P5") throw std::runtime_error("pgm: unsupported magic '" + magic + "' in " + file.string());
    try {
        width = std::stoi(next_pgm_token(in, file));
        height = std::stoi(next_pgm_token(in, file));
        const int maxval = std::stoi(next_pgm_token(in, file));
        if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) throw std::runtime_error("bad header values");
        const std::size_t n = static_cast<std::size_t>(width) * height;
        std::vector<double> px(n);
        if (magic == "P2") {
            for (auto& p : px) {
                int v;
                if (!(in >> v)) throw std::runtime_error("truncated pixel data");
                p = v;
            }
        } else {
            in.get();  // single whitespace after maxval
            const int bytes = maxval > 255 ? 2 : 1;
            std::vector<unsigned char> raw(n * bytes);
            if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size())))
                throw std::runtime_error("truncated pixel data");
            for (std::size_t i = 0; i < n; ++i)
                px[i] = bytes == 1 ? raw[i] : (raw[2 * i] << 8) | raw[2 * i + 1];
        }
        return px;
    } catch (const std::runtime_error& e) {
        if (std::string(e.what()).rfind("pgm:", 0) == 0) throw;
        throw std::runtime_error("pgm: " + std::string(e.what()) + " in " + file.string());
    } catch (const std::logic_error&) {
        throw std::runtime_error("pgm: malformed header in " + file.string());
    }
}

void write_pgm(const fs::path& file, int width, int height, const std::vector<int>& pixels, bool binary) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("pgm: cannot write " + file.string());
    out << (binary ? "P5" : "P2") << "\n" << width << " " << height << "\n255\n";
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        if (binary) out.put(static_cast<char>(std::clamp(pixels[i], 0, 255)));
        else out << pixels[i] << ((i + 1) % width == 0 ? '\n' : ' ');
    }
}

namespace {

std::vector<double> parse_csv_row(const std::string& line, const fs::path& file) {
    std::vector<double> row;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            row.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw std::runtime_error("csv: non-numeric cell '" + cell + "' in " + file.string());
        }
    }
    return row;
}

}  // namespace

LabeledDataset load_directory(const fs::path& root, ImageFormat format) {
    if (!fs::is_directory(root)) throw std::runtime_error("load_directory: not a directory: " + root.string());
    std::vector<fs::path> class_dirs;
    for (const auto& e : fs::directory_iterator(root))
        if (e.is_directory()) class_dirs.push_back(e.path());
    std::sort(class_dirs.begin(), class_dirs.end());
    if (class_dirs.empty()) throw std::runtime_error("load_directory: no class subdirectories in " + root.string());

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::size_t dim = 0;
    int ref_w = -1, ref_h = -1;
    for (std::size_t c = 0; c < class_dirs.size(); ++c) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(class_dirs[c]))
            if (e.is_regular_file()) files.push_back(e.path());
        std::sort(files.begin(), files.end());
        std::size_t before = rows.size();
        for (const auto& f : files) {
            if (format == ImageFormat::pgm) {
                int w = 0, h = 0;
                auto px = read_pgm(f, w, h);
                if (ref_w < 0) {
                    ref_w = w;
                    ref_h = h;
                    dim = px.size();
                } else if (w != ref_w || h != ref_h) {
                    throw std::runtime_error("load_directory: image size mismatch in " + f.string() + " (" +
                                             std::to_string(w) + "x" + std::to_string(h) + " vs " +
                                             std::to_string(ref_w) + "x" + std::to_string(ref_h) + ")");
                }
                rows.push_back(std::move(px));
                labels.push_back(static_cast<int>(c));
            } else {
                std::ifstream in(f);
                if (!in) throw std::runtime_error("load_directory: cannot open " + f.string());
                std::string line;
                while (std::getline(in, line)) {
                    if (line.empty()) continue;
                    auto row = parse_csv_row(line, f);
                    if (dim == 0) dim = row.size();
                    if (row.size() != dim) throw std::runtime_error("load_directory: row width mismatch in " + f.string());
                    rows.push_back(std::move(row));
                    labels.push_back(static_cast<int>(c));
                }
            }
        }
        if (rows.size() == before) throw std::runtime_error("load_directory: empty class " + class_dirs[c].string());
    }
    Eigen::MatrixXd features(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < dim; ++j) features(i, j) = rows[i][j];
    return make_dataset(std::move(features), std::move(labels), static_cast<int>(class_dirs.size()),
                        "load_directory:" + root.string());
}

LabeledDataset read_csv_dataset(std::istream& in, const std::string& origin) {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::string line;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto row = parse_csv_row(line, origin);
        if (row.size() < 2) throw std::runtime_error("csv: row needs a label and at least one feature in " + origin);
        const double label = row.front();
        if (label != std::floor(label) || label < 0) throw std::runtime_error("csv: invalid label in " + origin);
        if (dim == 0) dim = row.size() - 1;
        if (row.size() - 1 != dim) throw std::runtime_error("csv: row width mismatch in " + origin);
        labels.push_back(static_cast<int>(label));
        rows.emplace_back(row.begin() + 1, row.end());
    }
    if (rows.empty()) throw std::runtime_error("csv: no samples in " + origin);
    Eigen::MatrixXd features(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < dim; ++j) features(i, j) = rows[i][j];
    const int classes = *std::max_element(labels.begin(), labels.end()) + 1;
    return make_dataset(std::move(features), std::move(labels), classes, "read_csv:" + origin);
}

LabeledDataset read_csv_dataset(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("csv: cannot open " + file.string());
    return read_csv_dataset(in, file.string());
}

void write_csv_dataset(const LabeledDataset& ds, std::ostream& out) {
    char buf[32];
    for (Eigen::Index i = 0; i < ds.sample_count(); ++i) {
        out << ds.labels[i];
        for (Eigen::Index j = 0; j < ds.dimension(); ++j) {
            std::snprintf(buf, sizeof buf, ",%.17g", ds.features(i, j));
            out << buf;
        }
        out << '\n';
    }
}

LabeledDataset standardize(const LabeledDataset& ds) {
    LabeledDataset out = ds;
    out.constant_features.clear();
    const double n = static_cast<double>(ds.sample_count());
    for (Eigen::Index j = 0; j < ds.dimension(); ++j) {
        auto col = out.features.col(j);
        const double mean = col.mean();
        col.array() -= mean;
        const double sd = std::sqrt(col.squaredNorm() / n);
        if (sd > 1e-12) {
            col /= sd;
            // second centering pass removes the rounding residue of the first
            col.array() -= col.mean();
        } else {
            col.setZero();
            out.constant_features.push_back(static_cast<int>(j));
        }
    }
    out.per_feature_range = feature_ranges(out.features);
    std::string entry = "standardize";
    if (!out.constant_features.empty())
        entry += " (constant features: " + std::to_string(out.constant_features.size()) + ")";
    out.preprocessing_log.push_back(entry);
    return out;
}

LabeledDataset synth_generate(int class_count, int dim, int per_class, double separation, std::uint64_t seed) {
    if (class_count < 1 || dim < 1 || per_class < 1)
        throw std::invalid_argument("synth_generate: counts must be positive");
    if (separation < 0) throw std::invalid_argument("synth_generate: separation must be >= 0");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd means(class_count, dim);
    for (int c = 0; c < class_count; ++c) {
        Eigen::VectorXd v(dim);
        for (int j = 0; j < dim; ++j) v[j] = normal(rng);
        means.row(c) = (separation * v / v.norm()).transpose();
    }
    Eigen::MatrixXd x(class_count * per_class, dim);
    std::vector<int> labels(class_count * per_class);
    for (int c = 0; c < class_count; ++c)
        for (int s = 0; s < per_class; ++s) {
            const int row = c * per_class + s;
            labels[row] = c;
            for (int j = 0; j < dim; ++j) x(row, j) = means(c, j) + normal(rng);
        }
    std::ostringstream origin;
    origin << "synth_generate(classes=" << class_count << ",dim=" << dim << ",per_class=" << per_class
           << ",separation=" << separation << ",seed=" << seed << ")";
    return make_dataset(std::move(x), std::move(labels), class_count, origin.str());
}

namespace {

LabeledDataset subset(const LabeledDataset& ds, const std::vector<Eigen::Index>& rows, const std::string& entry) {
    LabeledDataset out;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), ds.dimension());
    out.labels.resize(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        out.features.row(k) = ds.features.row(rows[k]);
        out.labels[k] = ds.labels[rows[k]];
    }
    out.class_count = ds.class_count;
    out.preprocessing_log = ds.preprocessing_log;
    out.preprocessing_log.push_back(entry);
    out.refresh();
    return out;
}

}  // namespace

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& ds, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("split: fraction must lie in (0, 1)");
    std::mt19937_64 rng(seed);
    std::vector<Eigen::Index> train, test;
    for (int c = 0; c < ds.class_count; ++c) {
        std::vector<Eigen::Index> rows;
        for (std::size_t i = 0; i < ds.labels.size(); ++i)
            if (ds.labels[i] == c) rows.push_back(static_cast<Eigen::Index>(i));
        const auto n = static_cast<long>(rows.size());
        const long n_train = std::lround(fraction * static_cast<double>(n));
        if (n < 2 || n_train < 1 || n_train > n - 1)
            throw std::invalid_argument("split: class " + std::to_string(c) + " too small to stratify (" +
                                        std::to_string(n) + " samples)");
        std::shuffle(rows.begin(), rows.end(), rng);
        std::sort(rows.begin(), rows.begin() + n_train);
        std::sort(rows.begin() + n_train, rows.end());
        train.insert(train.end(), rows.begin(), rows.begin() + n_train);
        test.insert(test.end(), rows.begin() + n_train, rows.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    std::ostringstream tag;
    tag << "split(fraction=" << fraction << ",seed=" << seed << ")";
    return {subset(ds, train, tag.str() + ":train"), subset(ds, test, tag.str() + ":test")};
}

LabeledDataset restrict_classes(const LabeledDataset& ds, int k) {
    if (k < 1 || k > ds.class_count) throw std::invalid_argument("restrict_classes: k out of range");
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < ds.labels.size(); ++i)
        if (ds.labels[i] < k) rows.push_back(static_cast<Eigen::Index>(i));
    LabeledDataset out;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), ds.dimension());
    out.labels.resize(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.features.row(r) = ds.features.row(rows[r]);
        out.labels[r] = ds.labels[rows[r]];
    }
    out.class_count = k;
    out.preprocessing_log = ds.preprocessing_log;
    out.preprocessing_log.push_back("restrict_classes(" + std::to_string(k) + ")");
    out.refresh();
    return out;
}

double nearest_mean_accuracy(const LabeledDataset& train, const LabeledDataset& test) {
    Eigen::MatrixXd means(train.class_count, train.dimension());
    for (int c = 0; c < train.class_count; ++c) means.row(c) = train.class_samples(c).colwise().mean();
    int correct = 0;
    for (Eigen::Index i = 0; i < test.sample_count(); ++i) {
        Eigen::Index best = 0;
        (means.rowwise() - test.features.row(i)).rowwise().squaredNorm().minCoeff(&best);
        if (static_cast<int>(best) == test.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(test.sample_count());
}

}  // namespace rmtinit
