// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scenetok/scene_merge.hpp"
#include "scenetok/scene_select.hpp"
#include "scenetok/tensor.hpp"

namespace scenetok {

enum class SelectionMethod {
    Uniform,
    KMeans,
    Bsm,
};

std::string_view to_string(SelectionMethod method);
/// Accepts "uniform", "kmeans", "bsm".
SelectionMethod parse_selection_method(std::string_view name);

struct CompressConfig {
    std::size_t input_frames = 96;
    std::size_t scenes_k = 32;
    std::size_t supplements_r = 2;
    SelectionMethod selection = SelectionMethod::KMeans;
    MergeStrategy merging = MergeStrategy::WeightedFusion;
    std::uint64_t seed = 0;

    std::size_t scene_size() const { return supplements_r + 1; }
    /// Throws Parameter with an explanation when the config cannot run on `n_frames`.
    void validate(std::size_t n_frames) const;

    bool operator==(const CompressConfig&) const = default;
};

/// i_j = floor(j * total / n), j = 0..n-1.
std::vector<std::size_t> uniform_sample_indices(std::size_t total, std::size_t n);

/// Consecutive chunks of `scene_size`; the middle member represents each chunk.
SceneSet group_uniform_scenes(std::span<const std::size_t> indices, std::size_t scene_size);

struct CompressResult {
    FrameFeatures features;  // (scenes_k, L, D)
    SceneSet scenes;         // frame ids refer to the input tensor
};

CompressResult compress(const FrameFeatures& features, const CompressConfig& config,
                        const std::optional<FusionWeights>& weights = std::nullopt);

/// Mean over input frames of the squared distance between the frame's
/// representative feature and the nearest compressed frame's representative.
double reconstruction_proxy(const FrameFeatures& original, const FrameFeatures& compressed);

struct BenchEntry {
    CompressConfig config;
    std::size_t out_frames = 0;
    double wall_ms = 0.0;
    double recon_mse = 0.0;
};

/// With record_timing = false every wall_ms is reported as 0 so the report is reproducible.
std::vector<BenchEntry> bench(const FrameFeatures& features, const std::vector<CompressConfig>& configs,
                              bool record_timing = true);

std::string format_bench_table(const std::vector<BenchEntry>& entries);

}  // namespace scenetok
