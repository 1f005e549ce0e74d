#pragma once

#include <Eigen/Dense>

#include "rmtinit/dataset.hpp"

namespace rmtinit {

/// Principal axes of the population covariance: components are the rows,
/// orthonormal, with eigenvalues in non-increasing order.
struct PcaBasis {
    Eigen::VectorXd mean_vector;
    Eigen::MatrixXd components;  // k x N
    Eigen::VectorXd eigenvalues;
};

/// Uses the Gram matrix when there are fewer samples than features.
/// Rejects k outside [1, min(N_samp, N)].
PcaBasis fit_pca(const LabeledDataset& ds, int k);

LabeledDataset project(const PcaBasis& basis, const LabeledDataset& ds);

/// Maps projected coordinates back to feature space.
Eigen::MatrixXd reconstruct(const PcaBasis& basis, const Eigen::MatrixXd& projected);

}  // namespace rmtinit
