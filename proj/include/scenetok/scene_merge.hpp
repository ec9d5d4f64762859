// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scenetok/tensor.hpp"

namespace scenetok {

/// Stacked feature maps of one scene, shape (s, L, D).
using SceneTensor = Tensor3f;

/// Per-frame, per-patch, per-dim fusion weights, shape (s, L, D).
struct FusionWeights {
    Tensor3d w;

    const Shape3& shape() const { return w.shape(); }
};

struct AttnProjections {
    Matrix wq;  // (D, D)
    Matrix wk;  // (D, D)
    std::uint64_t seed = 0;
};

/// Tokens after merging; sizes[i] counts the original tokens folded into row i.
struct SizedTokens {
    Matrix tokens;
    std::vector<std::size_t> sizes;
};

enum class MergeStrategy {
    TemporalAverage,
    WeightedFusion,
    AttentionPool,
    Bsm,
};

std::string_view to_string(MergeStrategy strategy);
/// Accepts "tavg", "fusion", "attnpool", "bsm".
MergeStrategy parse_merge_strategy(std::string_view name);

Matrix temporal_average(const SceneTensor& scene);

/// Every weight set to 1/s, so fusion starts out as the temporal average.
FusionWeights fusion_init(std::size_t s, std::size_t patches, std::size_t dim);

/// out = sum_i F_i (elementwise *) W_i.
Matrix fusion(const SceneTensor& scene, const FusionWeights& weights);

/// d(loss)/dW for loss = <upstream, fusion(scene, W)>: grad[i] = upstream (*) F_i.
Tensor3d fusion_gradient(const SceneTensor& scene, const FusionWeights& weights, const Matrix& upstream);

struct FitResult {
    FusionWeights weights;
    std::vector<double> losses;  // loss before each step, then the final loss
    std::size_t best_step = 0;
};

/// Loss = mean over scenes of 0.5 * ||fusion(scene) - target||^2.
double fusion_loss(const std::vector<SceneTensor>& scenes, const std::vector<Matrix>& targets,
                   const FusionWeights& weights);

/// Plain gradient descent from fusion_init; returns the lowest-loss iterate.
FitResult fit_fusion_weights(const std::vector<SceneTensor>& scenes, const std::vector<Matrix>& targets, double lr,
                             std::size_t steps);

/// Xavier-uniform (D, D) query/key projections.
AttnProjections xavier_projections(std::size_t dim, std::uint64_t seed);

inline std::size_t middle_frame(std::size_t s) { return s / 2; }

/// Softmax weights over the frame axis, shape (s, L): entry (m, j) weights frame m at patch j.
Matrix attention_weights(const SceneTensor& scene, const AttnProjections& proj);

Matrix attention_pool(const SceneTensor& scene, const AttnProjections& proj);

SizedTokens bsm_merge(const Matrix& tokens, std::size_t target);

struct MergeParams {
    std::optional<FusionWeights> fusion_weights;  // defaults to fusion_init
    std::optional<AttnProjections> projections;   // defaults to xavier_projections(D, seed)
    std::uint64_t seed = 0;
};

Matrix merge_scene(const SceneTensor& scene, MergeStrategy strategy, const MergeParams& params = {});

}  // namespace scenetok
