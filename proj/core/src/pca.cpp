#include "rmtinit/pca.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rmtinit {

namespace {

// Orthonormalizes `v` against the first `filled` rows; false if it vanishes.
bool orthonormalize_into(Eigen::MatrixXd& rows, Eigen::Index filled, Eigen::VectorXd v) {
    for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index r = 0; r < filled; ++r) v -= rows.row(r).dot(v) * rows.row(r).transpose();
    const double norm = v.norm();
    if (norm < 1e-10) return false;
    rows.row(filled) = (v / norm).transpose();
    return true;
}

}  // namespace

PcaBasis fit_pca(const LabeledDataset& ds, int k) {
    const Eigen::Index n_samp = ds.sample_count(), dim = ds.dimension();
    if (k < 1 || k > std::min(n_samp, dim))
        throw std::invalid_argument("fit_pca: k=" + std::to_string(k) + " outside [1, min(N_samp, N)]");

    PcaBasis basis;
    basis.mean_vector = ds.features.colwise().mean().transpose();
    const Eigen::MatrixXd centered = ds.features.rowwise() - basis.mean_vector.transpose();
    const double ns = static_cast<double>(n_samp);

    Eigen::MatrixXd candidates(k, dim);
    Eigen::VectorXd values(k);
    if (n_samp >= dim) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(centered.transpose() * centered / ns);
        for (int i = 0; i < k; ++i) {
            candidates.row(i) = es.eigenvectors().col(dim - 1 - i).transpose();
            values[i] = es.eigenvalues()[dim - 1 - i];
        }
    } else {
        // Gram trick: eigenvectors a of X X^T / n map to X^T a.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(centered * centered.transpose() / ns);
        for (int i = 0; i < k; ++i) {
            const Eigen::Index c = n_samp - 1 - i;
            values[i] = es.eigenvalues()[c];
            candidates.row(i) = (centered.transpose() * es.eigenvectors().col(c)).transpose();
        }
    }

    basis.components.resize(k, dim);
    basis.eigenvalues.resize(k);
    Eigen::Index filled = 0;
    const double top = std::max(values.maxCoeff(), 0.0);
    for (int i = 0; i < k; ++i) {
        if (values[i] > 1e-12 * std::max(top, 1e-300) &&
            orthonormalize_into(basis.components, filled, candidates.row(i).transpose())) {
            basis.eigenvalues[filled] = std::max(values[i], 0.0);
            ++filled;
        }
    }
    // Null directions (rank-deficient data): complete with any orthonormal vectors.
    for (Eigen::Index e = 0; filled < k && e < dim; ++e) {
        if (orthonormalize_into(basis.components, filled, Eigen::VectorXd::Unit(dim, e))) {
            basis.eigenvalues[filled] = 0.0;
            ++filled;
        }
    }
    return basis;
}

LabeledDataset project(const PcaBasis& basis, const LabeledDataset& ds) {
    if (ds.dimension() != basis.mean_vector.size()) throw std::invalid_argument("project: dimension mismatch");
    LabeledDataset out = ds;
    out.features = (ds.features.rowwise() - basis.mean_vector.transpose()) * basis.components.transpose();
    out.constant_features.clear();
    out.per_feature_range = feature_ranges(out.features);
    out.preprocessing_log.push_back("pca_project(k=" + std::to_string(basis.components.rows()) + ")");
    return out;
}

Eigen::MatrixXd reconstruct(const PcaBasis& basis, const Eigen::MatrixXd& projected) {
    return (projected * basis.components).rowwise() + basis.mean_vector.transpose();
}

}  // namespace rmtinit
