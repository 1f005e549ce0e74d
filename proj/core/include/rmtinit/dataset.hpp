#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace rmtinit {

/// Samples in rows, features in columns, labels in [0, class_count).
struct LabeledDataset {
    Eigen::MatrixXd features;
    std::vector<int> labels;
    int class_count = 0;
    std::vector<std::pair<double, double>> per_feature_range;
    std::vector<std::string> preprocessing_log;
    std::vector<int> constant_features;  // zero-variance columns found by standardize

    Eigen::Index sample_count() const { return features.rows(); }
    Eigen::Index dimension() const { return features.cols(); }

    /// Rows belonging to one label, in dataset order.
    Eigen::MatrixXd class_samples(int label) const;
    std::vector<int> class_sizes() const;

    /// Recomputes per_feature_range and checks the label invariants
    /// (std::invalid_argument on violation).
    void refresh();
};

std::vector<std::pair<double, double>> feature_ranges(const Eigen::MatrixXd& features);

/// Builds a dataset and validates labels / non-empty classes.
LabeledDataset make_dataset(Eigen::MatrixXd features, std::vector<int> labels, int class_count,
                            std::string origin);

enum class ImageFormat { pgm, csv };

/// One subdirectory per class (labels follow sorted directory names). PGM
/// images (P2 or P5) are flattened row-major; in csv format every file holds
/// one sample per line. Errors name the offending path.
LabeledDataset load_directory(const std::filesystem::path& root, ImageFormat format);

/// Flattened pixels of a P2/P5 image. Sets width/height.
std::vector<double> read_pgm(const std::filesystem::path& file, int& width, int& height);
void write_pgm(const std::filesystem::path& file, int width, int height, const std::vector<int>& pixels,
               bool binary = true);

/// Flat CSV: first column integer label, remaining columns features.
LabeledDataset read_csv_dataset(std::istream& in, const std::string& origin = "csv");
LabeledDataset read_csv_dataset(const std::filesystem::path& file);
void write_csv_dataset(const LabeledDataset& ds, std::ostream& out);

/// Per-feature mean removal and division by the population standard
/// deviation. Zero-variance columns are only centered and listed in
/// constant_features.
LabeledDataset standardize(const LabeledDataset& ds);

/// class c ~ N(m_c, I) with m_c drawn uniformly on the sphere of radius `separation`.
LabeledDataset synth_generate(int class_count, int dim, int per_class, double separation, std::uint64_t seed);

/// Stratified split; every class keeps >= 1 sample on both sides, otherwise
/// std::invalid_argument naming the class.
std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& ds, double train_fraction,
                                                std::uint64_t seed);

/// Keeps only samples whose label is < k (relabelling is unnecessary).
LabeledDataset restrict_classes(const LabeledDataset& ds, int k);

/// Accuracy of assigning each sample to the nearest class mean computed on `train`.
double nearest_mean_accuracy(const LabeledDataset& train, const LabeledDataset& test);

}  // namespace rmtinit
