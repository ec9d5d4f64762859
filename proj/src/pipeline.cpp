// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenetok/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <limits>

namespace scenetok {

std::string_view to_string(SelectionMethod method) {
    switch (method) {
    case SelectionMethod::Uniform:
        return "uniform";
    case SelectionMethod::KMeans:
        return "kmeans";
    case SelectionMethod::Bsm:
        return "bsm";
    }
    return "?";
}

SelectionMethod parse_selection_method(std::string_view name) {
    if (name == "uniform") {
        return SelectionMethod::Uniform;
    }
    if (name == "kmeans") {
        return SelectionMethod::KMeans;
    }
    if (name == "bsm") {
        return SelectionMethod::Bsm;
    }
    fail(ErrorKind::Parameter, "unknown selection method '" + std::string(name) + "' (valid: uniform, kmeans, bsm)");
}

void CompressConfig::validate(std::size_t n_frames) const {
    require(scenes_k >= 1, ErrorKind::Parameter, "scenes_k must be >= 1");
    require(input_frames >= 1, ErrorKind::Parameter, "input_frames must be >= 1");
    require(input_frames <= n_frames, ErrorKind::Parameter,
            "input_frames = " + std::to_string(input_frames) + " exceeds the " + std::to_string(n_frames) +
                " frames available");
    require(scenes_k * scene_size() <= input_frames, ErrorKind::Parameter,
            "scenes_k * (supplements_r + 1) = " + std::to_string(scenes_k) + " * " + std::to_string(scene_size()) +
                " = " + std::to_string(scenes_k * scene_size()) + " exceeds input_frames = " +
                std::to_string(input_frames));
}

std::vector<std::size_t> uniform_sample_indices(std::size_t total, std::size_t n) {
    require(n >= 1 && n <= total, ErrorKind::Parameter,
            "uniform sampling needs 1 <= n <= total, got n = " + std::to_string(n) + ", total = " +
                std::to_string(total));
    std::vector<std::size_t> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = j * total / n;
    }
    return out;
}

SceneSet group_uniform_scenes(std::span<const std::size_t> indices, std::size_t scene_size) {
    require(scene_size >= 1, ErrorKind::Parameter, "scene_size must be >= 1");
    require(!indices.empty() && indices.size() % scene_size == 0, ErrorKind::Parameter,
            std::to_string(indices.size()) + " frames cannot be split into scenes of " + std::to_string(scene_size));
    for (std::size_t i = 1; i < indices.size(); ++i) {
        require(indices[i - 1] < indices[i], ErrorKind::Parameter, "frame indices must be strictly increasing");
    }
    SceneSet out;
    out.k = indices.size() / scene_size;
    out.r = scene_size - 1;
    for (std::size_t c = 0; c < out.k; ++c) {
        Scene scene;
        scene.members.assign(indices.begin() + c * scene_size, indices.begin() + (c + 1) * scene_size);
        scene.representative = scene.members[scene_size / 2];
        out.scenes.push_back(std::move(scene));
    }
    return out;
}

CompressResult compress(const FrameFeatures& features, const CompressConfig& config,
                        const std::optional<FusionWeights>& weights) {
    features.validate();
    config.validate(features.frames());
    const std::size_t l = features.patches();
    const std::size_t d = features.dim();
    const std::size_t s = config.scene_size();
    if (weights) {
        require(weights->shape() == Shape3{s, l, d}, ErrorKind::Parameter,
                "fusion weights shape " + to_string(weights->shape()) + " does not match scene shape " +
                    to_string(Shape3{s, l, d}));
    }

    const auto sampled = uniform_sample_indices(features.frames(), config.input_frames);
    const FrameFeatures pool = gather_frames(features, sampled);

    SceneSet scenes;
    switch (config.selection) {
    case SelectionMethod::Uniform:
        scenes = group_uniform_scenes(uniform_sample_indices(config.input_frames, config.scenes_k * s), s);
        break;
    case SelectionMethod::KMeans: {
        SelectParams params;
        params.kmeans.seed = config.seed;
        scenes = select_scenes_kmeans(pool, config.scenes_k, config.supplements_r, params);
        break;
    }
    case SelectionMethod::Bsm:
        scenes = select_scenes_bsm(pool, config.scenes_k, config.supplements_r);
        break;
    }
    for (Scene& scene : scenes.scenes) {
        scene.representative = sampled[scene.representative];
        for (std::size_t& m : scene.members) {
            m = sampled[m];
        }
    }

    MergeParams merge_params;
    merge_params.seed = config.seed;
    merge_params.fusion_weights = weights;
    if (config.merging == MergeStrategy::AttentionPool) {
        merge_params.projections = xavier_projections(d, config.seed);
    }

    Tensor3f out(Shape3{scenes.scenes.size(), l, d});
    std::optional<std::vector<double>> timestamps;
    if (features.frame_timestamps) {
        timestamps.emplace();
    }
    for (std::size_t i = 0; i < scenes.scenes.size(); ++i) {
        const Scene& scene = scenes.scenes[i];
        const FrameFeatures members = gather_frames(features, scene.members);
        const Matrix merged = merge_scene(members.data, config.merging, merge_params);
        auto dst = out.slice(i);
        const auto src = merged.values();
        for (std::size_t x = 0; x < dst.size(); ++x) {
            dst[x] = static_cast<float>(src[x]);
        }
        if (timestamps) {
            timestamps->push_back((*features.frame_timestamps)[scene.representative]);
        }
    }
    FrameFeatures compressed{std::move(out), std::move(timestamps)};
    compressed.validate();
    return CompressResult{std::move(compressed), std::move(scenes)};
}

double reconstruction_proxy(const FrameFeatures& original, const FrameFeatures& compressed) {
    require(original.dim() == compressed.dim(), ErrorKind::Parameter, "reconstruction_proxy: dim mismatch");
    const RepFeatures a = representative_features(original);
    const RepFeatures b = representative_features(compressed);
    double total = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.rows(); ++j) {
            best = std::min(best, squared_distance(a.row(i), b.row(j)));
        }
        total += best;
    }
    return total / static_cast<double>(a.rows());
}

std::vector<BenchEntry> bench(const FrameFeatures& features, const std::vector<CompressConfig>& configs,
                              bool record_timing) {
    require(!configs.empty(), ErrorKind::Parameter, "bench: no configs");
    for (const auto& config : configs) {
        config.validate(features.frames());
    }
    std::vector<BenchEntry> entries;
    for (const auto& config : configs) {
        const auto start = std::chrono::steady_clock::now();
        const CompressResult result = compress(features, config);
        const auto stop = std::chrono::steady_clock::now();
        BenchEntry entry;
        entry.config = config;
        entry.out_frames = result.features.frames();
        entry.wall_ms = record_timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
        entry.recon_mse = reconstruction_proxy(features, result.features);
        entries.push_back(entry);
    }
    return entries;
}

std::string format_bench_table(const std::vector<BenchEntry>& entries) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-9s %-9s %6s %5s %4s %10s %10s %14s\n", "selection", "merging", "input", "k",
                  "r", "out_frames", "wall_ms", "recon_mse");
    out += line;
    for (const auto& e : entries) {
        std::snprintf(line, sizeof(line), "%-9s %-9s %6zu %5zu %4zu %10zu %10.3f %14.6g\n",
                      std::string(to_string(e.config.selection)).c_str(),
                      std::string(to_string(e.config.merging)).c_str(), e.config.input_frames, e.config.scenes_k,
                      e.config.supplements_r, e.out_frames, e.wall_ms, e.recon_mse);
        out += line;
    }
    return out;
}

}  // namespace scenetok
