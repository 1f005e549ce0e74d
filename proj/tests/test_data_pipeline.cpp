#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "rmtinit/dataset.hpp"
#include "rmtinit/pca.hpp"

using namespace rmtinit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

LabeledDataset random_dataset(int n, int dim, int classes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Eigen::MatrixXd x(n, dim);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng) * (1 + (i % dim));
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = i % classes;
    return make_dataset(x, labels, classes, "random");
}

void check_standardized(const LabeledDataset& ds) {
    for (Eigen::Index j = 0; j < ds.dimension(); ++j) {
        const auto col = ds.features.col(j).array();
        CHECK(std::abs(col.mean()) <= 1e-9);
        const bool flagged = std::find(ds.constant_features.begin(), ds.constant_features.end(), j) != ds.constant_features.end();
        if (flagged) CHECK(col.abs().maxCoeff() == 0.0);
        else CHECK(std::abs((col - col.mean()).square().mean() - 1.0) <= 1e-6);
    }
}

void make_layout(const fs::path& root, int classes, int per_class, int w, int h) {
    for (int c = 0; c < classes; ++c) {
        char name[32];
        std::snprintf(name, sizeof name, "s%03d", c);
        fs::create_directories(root / name);
        for (int i = 0; i < per_class; ++i) {
            std::vector<int> px(static_cast<std::size_t>(w * h));
            for (std::size_t k = 0; k < px.size(); ++k) px[k] = (c * 7 + i * 3 + static_cast<int>(k)) % 256;
            write_pgm(root / name / ("img" + std::to_string(i) + ".pgm"), w, h, px, i % 2 == 0);
        }
    }
}

}  // namespace

TEST_CASE("pgm round trip in both encodings") {
    TempDir dir("rmtinit_pgm");
    const std::vector<int> px{0, 10, 200, 255, 7, 64};
    for (bool binary : {true, false}) {
        const auto f = dir.path / (binary ? "b.pgm" : "a.pgm");
        write_pgm(f, 3, 2, px, binary);
        int w = 0, h = 0;
        const auto back = read_pgm(f, w, h);
        CHECK(w == 3);
        CHECK(h == 2);
        for (std::size_t i = 0; i < px.size(); ++i) CHECK(back[i] == px[i]);
    }
    {
        std::ofstream f(dir.path / "c.pgm");
        f << "P2\n# comment line\n2 1\n# another\n65535\n1000 65535\n";
    }
    int w = 0, h = 0;
    const auto wide = read_pgm(dir.path / "c.pgm", w, h);
    CHECK(wide[1] == 65535);
    {
        std::ofstream f(dir.path / "bad.pgm");
        f << "P6\n1 1\n255\n";
    }
    CHECK_THROWS_WITH_AS(read_pgm(dir.path / "bad.pgm", w, h), doctest::Contains("bad.pgm"), std::runtime_error);
}

TEST_CASE("load_directory shape contract") {
    TempDir dir("rmtinit_load_small");
    make_layout(dir.path, 2, 1, 2, 2);
    const auto ds = load_directory(dir.path, ImageFormat::pgm);
    CHECK(ds.features.rows() == 2);
    CHECK(ds.features.cols() == 4);
    CHECK(ds.labels == std::vector<int>{0, 1});
    CHECK(ds.class_count == 2);
}

TEST_CASE("face-database shaped layouts") {
    {
        TempDir dir("rmtinit_load_ar");
        make_layout(dir.path, 100, 26, 3, 2);
        const auto ds = load_directory(dir.path, ImageFormat::pgm);
        CHECK(ds.class_count == 100);
        CHECK(ds.sample_count() == 2600);
    }
    {
        TempDir dir("rmtinit_load_yale");
        make_layout(dir.path, 37, 20, 3, 2);
        const auto ds = load_directory(dir.path, ImageFormat::pgm);
        CHECK(ds.class_count == 37);
        CHECK(ds.sample_count() == 740);
    }
}

TEST_CASE("load_directory errors name the offending path") {
    TempDir dir("rmtinit_load_bad");
    make_layout(dir.path, 2, 2, 2, 2);
    write_pgm(dir.path / "s001" / "odd.pgm", 3, 3, std::vector<int>(9, 1));
    CHECK_THROWS_WITH(load_directory(dir.path, ImageFormat::pgm), doctest::Contains("odd.pgm"));
    fs::remove(dir.path / "s001" / "odd.pgm");
    fs::create_directories(dir.path / "s002");
    CHECK_THROWS_WITH(load_directory(dir.path, ImageFormat::pgm), doctest::Contains("s002"));
    CHECK_THROWS(load_directory(dir.path / "missing", ImageFormat::pgm));
}

TEST_CASE("csv dataset reader and writer") {
    std::istringstream in("0,1.5,2\n1,3,4.25\n0,-1,0\n");
    const auto ds = read_csv_dataset(in);
    CHECK(ds.class_count == 2);
    CHECK(ds.features(1, 1) == 4.25);
    std::ostringstream out;
    write_csv_dataset(ds, out);
    std::istringstream again(out.str());
    const auto back = read_csv_dataset(again);
    CHECK(back.features == ds.features);
    CHECK(back.labels == ds.labels);
    std::istringstream bad("0,1\n1,2,3\n");
    CHECK_THROWS(read_csv_dataset(bad));
}

TEST_CASE("standardize properties") {
    auto ds = random_dataset(50, 6, 2, 1);
    ds.features.col(3).setConstant(4.0);
    const auto s = standardize(ds);
    check_standardized(s);
    CHECK(s.constant_features == std::vector<int>{3});
    const auto twice = standardize(s);
    CHECK((twice.features - s.features).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("pca on antipodal points") {
    Eigen::MatrixXd x(2, 3);
    x << 1, 2, 2, -1, -2, -2;
    const auto ds = make_dataset(x, {0, 1}, 2, "antipodal");
    const auto basis = fit_pca(ds, 1);
    const Eigen::Vector3d v(1, 2, 2);
    CHECK(std::abs(basis.components.row(0).dot(v.normalized())) == doctest::Approx(1.0));
    const auto p = project(basis, ds);
    CHECK(std::abs(p.features(0, 0)) == doctest::Approx(3.0));
    CHECK(p.features(0, 0) == doctest::Approx(-p.features(1, 0)));
}

TEST_CASE("pca basis orthonormal and sorted, both eigen paths") {
    for (auto [n, dim] : {std::pair{40, 8}, std::pair{10, 30}}) {
        const auto ds = random_dataset(n, dim, 2, 3);
        const int k = std::min(n, dim);
        const auto b = fit_pca(ds, k);
        const Eigen::MatrixXd gram = b.components * b.components.transpose();
        CHECK((gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff() <= 1e-10);
        for (int i = 1; i < k; ++i) CHECK(b.eigenvalues[i] <= b.eigenvalues[i - 1]);
        CHECK(b.eigenvalues.minCoeff() >= 0);
    }
    CHECK_THROWS(fit_pca(random_dataset(10, 5, 2, 1), 6));
    CHECK_THROWS(fit_pca(random_dataset(10, 5, 2, 1), 0));
}

TEST_CASE("gram path matches the covariance path") {
    // 12 samples in 30 dimensions vs the same data padded into a wide-sample problem
    const auto ds = random_dataset(12, 30, 3, 5);
    const auto gram = fit_pca(ds, 5);
    const Eigen::MatrixXd centered = ds.features.rowwise() - ds.features.colwise().mean();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(centered.transpose() * centered / 12.0);
    for (int i = 0; i < 5; ++i) {
        CHECK(gram.eigenvalues[i] == doctest::Approx(es.eigenvalues()[29 - i]).epsilon(1e-9));
        CHECK(std::abs(gram.components.row(i).dot(es.eigenvectors().col(29 - i))) == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("reconstruction error does not grow with k") {
    const auto ds = random_dataset(30, 10, 2, 7);
    double prev = INFINITY;
    for (int k = 1; k <= 10; ++k) {
        const auto b = fit_pca(ds, k);
        const auto p = project(b, ds);
        const double err = (reconstruct(b, p.features) - ds.features).squaredNorm();
        CHECK(err <= prev + 1e-9);
        prev = err;
    }
    CHECK(prev <= 1e-18 * ds.features.squaredNorm() + 1e-12);
}

TEST_CASE("pca projection contracts pairwise distances") {
    const auto ds = random_dataset(25, 12, 2, 9);
    const auto p = project(fit_pca(ds, 4), ds);
    for (int i = 0; i < 25; ++i)
        for (int j = i + 1; j < 25; ++j)
            CHECK((p.features.row(i) - p.features.row(j)).norm() <= (ds.features.row(i) - ds.features.row(j)).norm() + 1e-12);
}

TEST_CASE("pipeline steps append to the log in order") {
    const auto ds = random_dataset(20, 6, 2, 2);
    const auto p = project(fit_pca(ds, 3), ds);
    const auto s = standardize(p);
    REQUIRE(s.preprocessing_log.size() == 3u);
    CHECK(s.preprocessing_log[0] == "random");
    CHECK(s.preprocessing_log[1].rfind("pca_project", 0) == 0);
    CHECK(s.preprocessing_log[2].rfind("standardize", 0) == 0);
}

TEST_CASE("synthetic generator: chance level, separation, determinism") {
    const auto mixed = synth_generate(10, 16, 100, 0.0, 1);
    auto [tr, te] = split(mixed, 0.5, 2);
    CHECK(std::abs(nearest_mean_accuracy(tr, te) - 0.1) <= 0.05);

    const auto far = synth_generate(10, 64, 30, 10.0, 3);
    auto [tr2, te2] = split(far, 0.5, 4);
    CHECK(nearest_mean_accuracy(tr2, te2) >= 0.99);

    const auto a = synth_generate(3, 5, 4, 2.0, 9), b = synth_generate(3, 5, 4, 2.0, 9);
    CHECK(a.features == b.features);
    CHECK(a.labels == b.labels);
    CHECK_THROWS(synth_generate(0, 5, 4, 1.0, 1));
    CHECK_THROWS(synth_generate(2, 5, 4, -1.0, 1));

    // class means lie on the sphere of the requested radius (up to sampling noise)
    const auto big = synth_generate(2, 8, 4000, 5.0, 11);
    for (int c = 0; c < 2; ++c) CHECK(big.class_samples(c).colwise().mean().norm() == doctest::Approx(5.0).epsilon(0.02));
}

TEST_CASE("stratified split") {
    const auto ds = random_dataset(52, 3, 2, 4);
    auto [tr, te] = split(ds, 0.5, 1);
    CHECK(tr.class_sizes() == std::vector<int>{13, 13});
    CHECK(te.class_sizes() == std::vector<int>{13, 13});

    std::vector<std::vector<double>> all, parts;
    for (int i = 0; i < ds.features.rows(); ++i) {
        std::vector<double> row(3);
        for (int j = 0; j < 3; ++j) row[j] = ds.features(i, j);
        row.push_back(ds.labels[i]);
        all.push_back(row);
    }
    for (const auto* part : {&tr, &te})
        for (int i = 0; i < part->features.rows(); ++i) {
            std::vector<double> row(3);
            for (int j = 0; j < 3; ++j) row[j] = part->features(i, j);
            row.push_back(part->labels[i]);
            parts.push_back(row);
        }
    std::sort(all.begin(), all.end());
    std::sort(parts.begin(), parts.end());
    CHECK(all == parts);

    auto [tr2, te2] = split(ds, 0.5, 1);
    CHECK(tr2.features == tr.features);

    auto tiny = random_dataset(5, 2, 2, 1);
    tiny.labels = {0, 0, 0, 0, 1};
    tiny.refresh();
    CHECK_THROWS_WITH(split(tiny, 0.5, 1), doctest::Contains("class 1"));
    CHECK_THROWS(split(ds, 1.0, 1));
}

TEST_CASE("restrict_classes keeps the first k labels") {
    const auto ds = random_dataset(30, 2, 5, 1);
    const auto r = restrict_classes(ds, 3);
    CHECK(r.class_count == 3);
    CHECK(r.sample_count() == 18);
    for (int l : r.labels) CHECK(l < 3);
    CHECK_THROWS(restrict_classes(ds, 6));
}
