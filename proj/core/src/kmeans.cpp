#include "rmtinit/kmeans.hpp"

#include <limits>
#include <random>
#include <stdexcept>

namespace rmtinit {

namespace {

double assign_nearest(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centroids, std::vector<int>& assignments) {
    double objective = 0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        int arg = 0;
        for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
            const double d = (x.row(i) - centroids.row(c)).squaredNorm();
            if (d < best) {
                best = d;
                arg = static_cast<int>(c);
            }
        }
        assignments[i] = arg;
        objective += best;
    }
    return objective;
}

double objective_of(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centroids, const std::vector<int>& a) {
    double sum = 0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) sum += (x.row(i) - centroids.row(a[i])).squaredNorm();
    return sum;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& x, int k, std::uint64_t seed, int max_iterations) {
    const Eigen::Index n = x.rows();
    if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (k > n) throw std::invalid_argument("kmeans: k exceeds the number of samples");

    std::mt19937_64 rng(seed);
    KMeansResult r;
    r.centroids.resize(k, x.cols());
    std::vector<char> chosen(static_cast<std::size_t>(n), 0);

    // k-means++ seeding
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    Eigen::Index first = pick(rng);
    r.centroids.row(0) = x.row(first);
    chosen[first] = 1;
    Eigen::VectorXd d2 = (x.rowwise() - x.row(first)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = d2.sum();
        Eigen::Index next = -1;
        if (total > 0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double target = u(rng), acc = 0;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += d2[i];
                if (d2[i] > 0 && acc >= target) {
                    next = i;
                    break;
                }
            }
            if (next < 0)
                for (Eigen::Index i = n; i-- > 0;)
                    if (d2[i] > 0) {
                        next = i;
                        break;
                    }
        }
        if (next < 0)
            for (Eigen::Index i = 0; i < n; ++i)
                if (!chosen[i]) {
                    next = i;
                    break;
                }
        chosen[next] = 1;
        r.centroids.row(c) = x.row(next);
        d2 = d2.cwiseMin((x.rowwise() - x.row(next)).rowwise().squaredNorm());
    }

    r.assignments.assign(static_cast<std::size_t>(n), 0);
    r.objective_history.push_back(assign_nearest(x, r.centroids, r.assignments));

    for (int iter = 0; iter < max_iterations; ++iter) {
        // re-seed empty clusters with the point farthest from its centroid
        std::vector<int> sizes(k, 0);
        for (int a : r.assignments) ++sizes[a];
        for (int c = 0; c < k; ++c) {
            if (sizes[c] > 0) continue;
            Eigen::Index far = -1;
            double far_d = -1;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (sizes[r.assignments[i]] < 2) continue;
                const double d = (x.row(i) - r.centroids.row(r.assignments[i])).squaredNorm();
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            if (far < 0) break;
            --sizes[r.assignments[far]];
            r.assignments[far] = c;
            sizes[c] = 1;
            r.centroids.row(c) = x.row(far);
        }

        // update step
        r.centroids.setZero();
        for (Eigen::Index i = 0; i < n; ++i) r.centroids.row(r.assignments[i]) += x.row(i);
        for (int c = 0; c < k; ++c)
            if (sizes[c] > 0) r.centroids.row(c) /= sizes[c];

        // assignment step; ties keep the current cluster
        std::vector<int> next = r.assignments;
        for (Eigen::Index i = 0; i < n; ++i) {
            double best = (x.row(i) - r.centroids.row(next[i])).squaredNorm();
            for (int c = 0; c < k; ++c) {
                const double d = (x.row(i) - r.centroids.row(c)).squaredNorm();
                if (d < best) {
                    best = d;
                    next[i] = c;
                }
            }
        }
        ++r.iterations;
        const bool stable = next == r.assignments;
        r.assignments = std::move(next);
        r.objective_history.push_back(objective_of(x, r.centroids, r.assignments));
        if (stable) {
            r.converged = true;
            break;
        }
    }
    return r;
}

}  // namespace rmtinit
