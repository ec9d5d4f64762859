// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "scenetok/scene_select.hpp"

namespace scenetok {

namespace {

struct Assignment {
    std::vector<std::size_t> labels;
    std::vector<double> sq_dist;  // distance of each row to its assigned center
    double objective = 0.0;
};

// Ties go to the lowest center index.
Assignment assign(const RepFeatures& reps, const Matrix& centers) {
    Assignment out;
    out.labels.resize(reps.rows());
    out.sq_dist.resize(reps.rows());
    for (std::size_t i = 0; i < reps.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < centers.rows(); ++j) {
            const double d = squared_distance(reps.row(i), centers.row(j));
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        out.labels[i] = best_j;
        out.sq_dist[i] = best;
        out.objective += best;
    }
    return out;
}

std::vector<std::size_t> init_random(std::size_t n, std::size_t m, std::mt19937_64& rng) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    // Partial Fisher-Yates: the first m slots are a uniform sample without replacement.
    for (std::size_t i = 0; i < m; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(m);
    return pool;
}

std::vector<std::size_t> init_plus_plus(const RepFeatures& reps, std::size_t m, std::mt19937_64& rng) {
    const std::size_t n = reps.rows();
    std::vector<std::size_t> chosen;
    std::vector<bool> taken(n, false);
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

    auto take = [&](std::size_t idx) {
        chosen.push_back(idx);
        taken[idx] = true;
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], squared_distance(reps.row(i), reps.row(idx)));
        }
    };

    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    take(first(rng));
    while (chosen.size() < m) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!taken[i]) {
                total += nearest[i];
            }
        }
        std::size_t pick = n;
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            const double target = u(rng);
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (taken[i] || nearest[i] <= 0.0) {
                    continue;
                }
                acc += nearest[i];
                pick = i;
                if (acc > target) {
                    break;
                }
            }
        }
        if (pick == n) {
            // Every remaining row coincides with a chosen one; fall back to a uniform distinct pick.
            std::vector<std::size_t> free;
            for (std::size_t i = 0; i < n; ++i) {
                if (!taken[i]) {
                    free.push_back(i);
                }
            }
            std::uniform_int_distribution<std::size_t> u(0, free.size() - 1);
            pick = free[u(rng)];
        }
        take(pick);
    }
    return chosen;
}

}  // namespace

double clustering_objective(const RepFeatures& reps, const Matrix& centers, std::span<const std::size_t> assignments) {
    double total = 0.0;
    for (std::size_t i = 0; i < reps.rows(); ++i) {
        total += squared_distance(reps.row(i), centers.row(assignments[i]));
    }
    return total;
}

Clustering kmeans(const RepFeatures& reps, std::size_t clusters, const KMeansParams& params) {
    const std::size_t n = reps.rows();
    const std::size_t dim = reps.cols();
    require(n >= 1 && dim >= 1, ErrorKind::Parameter, "kmeans: empty input");
    require(clusters >= 1 && clusters <= n, ErrorKind::Parameter,
            "kmeans: cluster count must be in [1, " + std::to_string(n) + "], got " + std::to_string(clusters));
    require(params.tol >= 0.0, ErrorKind::Parameter, "kmeans: tol must be non-negative");

    std::mt19937_64 rng(params.seed);
    const auto seeds = params.init == KMeansInit::Random ? init_random(n, clusters, rng)
                                                         : init_plus_plus(reps, clusters, rng);
    Matrix centers(clusters, dim);
    for (std::size_t j = 0; j < clusters; ++j) {
        const auto src = reps.row(seeds[j]);
        std::copy(src.begin(), src.end(), centers.row(j).begin());
    }

    Clustering result;
    for (std::size_t iter = 0; iter < params.max_iters; ++iter) {
        const Assignment a = assign(reps, centers);
        result.inertia_history.push_back(a.objective);

        Matrix next(clusters, dim);
        std::vector<std::size_t> counts(clusters, 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto row = next.row(a.labels[i]);
            const auto src = reps.row(i);
            for (std::size_t d = 0; d < dim; ++d) {
                row[d] += src[d];
            }
            ++counts[a.labels[i]];
        }
        std::vector<bool> reseeded(n, false);
        for (std::size_t j = 0; j < clusters; ++j) {
            auto row = next.row(j);
            if (counts[j] > 0) {
                for (double& v : row) {
                    v /= static_cast<double>(counts[j]);
                }
                continue;
            }
            // Empty cluster: move it onto the row worst served by its current center.
            std::size_t far = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (!reseeded[i] && (far == n || a.sq_dist[i] > a.sq_dist[far])) {
                    far = i;
                }
            }
            reseeded[far] = true;
            const auto src = reps.row(far);
            std::copy(src.begin(), src.end(), row.begin());
        }

        double shift = 0.0;
        for (std::size_t j = 0; j < clusters; ++j) {
            shift = std::max(shift, std::sqrt(squared_distance(centers.row(j), next.row(j))));
        }
        centers = std::move(next);
        result.iterations_run = iter + 1;
        if (shift < params.tol) {
            break;
        }
    }

    Assignment final_assignment = assign(reps, centers);
    result.inertia_history.push_back(final_assignment.objective);
    result.centers = std::move(centers);
    result.assignments = std::move(final_assignment.labels);
    result.inertia = final_assignment.objective;
    return result;
}

std::vector<std::size_t> representative_indices(const RepFeatures& reps, const Clustering& clustering) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < clustering.centers.rows(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < reps.rows(); ++i) {
            const double d = squared_distance(reps.row(i), clustering.centers.row(j));
            if (d < best) {
                best = d;
                best_i = i;
            }
        }
        out.push_back(best_i);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::size_t> distinct_representative_indices(const RepFeatures& reps, const Clustering& clustering) {
    require(clustering.centers.rows() <= reps.rows(), ErrorKind::Parameter,
            "more centers than frames to represent them");
    std::vector<bool> claimed(reps.rows(), false);
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < clustering.centers.rows(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_i = reps.rows();
        for (std::size_t i = 0; i < reps.rows(); ++i) {
            if (claimed[i]) {
                continue;
            }
            const double d = squared_distance(reps.row(i), clustering.centers.row(j));
            if (best_i == reps.rows() || d < best) {
                best = d;
                best_i = i;
            }
        }
        claimed[best_i] = true;
        out.push_back(best_i);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace scenetok
