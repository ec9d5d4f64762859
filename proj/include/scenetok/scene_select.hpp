// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scenetok/tensor.hpp"

namespace scenetok {

// ---------------------------------------------------------------------------
// K-means
// ---------------------------------------------------------------------------

enum class KMeansInit {
    Random,     // M distinct rows drawn uniformly without replacement
    PlusPlus,   // D^2-weighted seeding over distinct rows
};

struct KMeansParams {
    std::size_t max_iters = 100;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    KMeansInit init = KMeansInit::PlusPlus;
};

struct Clustering {
    Matrix centers;                        // (M, D)
    std::vector<std::size_t> assignments;  // N entries in [0, M)
    double inertia = 0.0;
    std::size_t iterations_run = 0;
    // Objective after every assignment step, in order.
    std::vector<double> inertia_history;
};

/// Row-wise mean of each frame's patch tokens, accumulated in double.
RepFeatures representative_features(const FrameFeatures& features);

Clustering kmeans(const RepFeatures& reps, std::size_t clusters, const KMeansParams& params = {});

/// Sum of squared distances from each row to its assigned center.
double clustering_objective(const RepFeatures& reps, const Matrix& centers,
                            std::span<const std::size_t> assignments);

/// Nearest frame to each center, duplicates collapsed, sorted ascending.
std::vector<std::size_t> representative_indices(const RepFeatures& reps, const Clustering& clustering);

/// Like representative_indices, but a center whose nearest frame is already
/// claimed by a lower-indexed center takes its nearest unclaimed frame, so
/// the result always has one frame per center.
std::vector<std::size_t> distinct_representative_indices(const RepFeatures& reps, const Clustering& clustering);

// ---------------------------------------------------------------------------
// Scenes
// ---------------------------------------------------------------------------

double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct Scene {
    std::size_t representative = 0;
    std::vector<std::size_t> members;  // strictly increasing, contains representative

    bool operator==(const Scene&) const = default;
};

struct SceneSet {
    std::size_t k = 0;
    std::size_t r = 0;
    std::vector<Scene> scenes;
    std::vector<std::string> warnings;

    std::size_t retained_frames() const;
    /// Throws Validation when scenes overlap, are unsorted, or miss their representative.
    void validate(std::size_t n_frames) const;

    bool operator==(const SceneSet&) const = default;
};

enum class SupplementOrder {
    MostSimilar,
    LeastSimilar,
};

/// Adds r supplement frames to each representative. Candidates come from the
/// history window (previous representative, this representative), then from
/// the window up to the next representative, then from any unclaimed frame.
SceneSet select_supplements(const RepFeatures& reps, std::span<const std::size_t> rep_indices, std::size_t r,
                            SupplementOrder order = SupplementOrder::MostSimilar);

struct SelectParams {
    KMeansParams kmeans;
    SupplementOrder order = SupplementOrder::MostSimilar;
};

SceneSet select_scenes_kmeans(const FrameFeatures& features, std::size_t k, std::size_t r,
                              const SelectParams& params = {});

/// Bipartite-matching selection over k contiguous segments.
SceneSet select_scenes_bsm(const FrameFeatures& features, std::size_t k, std::size_t r);

}  // namespace scenetok
