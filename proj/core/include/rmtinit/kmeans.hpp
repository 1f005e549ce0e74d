#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace rmtinit {

struct KMeansResult {
    std::vector<int> assignments;
    Eigen::MatrixXd centroids;            // k x dim
    std::vector<double> objective_history;  // within-cluster sum of squares; [0] right after seeding
    int iterations = 0;
    bool converged = false;

    double objective() const { return objective_history.empty() ? 0.0 : objective_history.back(); }
};

/// Lloyd iterations from k-means++ seeding. Stops when assignments are stable
/// or after max_iterations. Empty clusters are re-seeded with the point
/// farthest from its centroid. Rejects k < 1 and k > sample count.
KMeansResult kmeans(const Eigen::MatrixXd& features, int k, std::uint64_t seed, int max_iterations = 300);

}  // namespace rmtinit
