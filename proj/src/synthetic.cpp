// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenetok/synthetic.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace scenetok {

void SyntheticSpec::validate() const {
    require(n_frames >= 1 && n_patches >= 1 && dim >= 1, ErrorKind::Validation,
            "synthetic spec needs frames, patches and dim >= 1");
    require(n_scenes >= 1 && n_scenes <= n_frames, ErrorKind::Validation,
            "synthetic spec needs 1 <= scenes <= frames, got " + std::to_string(n_scenes) + " scenes for " +
                std::to_string(n_frames) + " frames");
    require(std::isfinite(noise_sigma) && noise_sigma >= 0.0, ErrorKind::Validation,
            "noise_sigma must be finite and non-negative");
    if (!block_lengths.empty()) {
        require(block_lengths.size() == n_scenes, ErrorKind::Validation,
                "block_lengths must list one length per scene");
        for (std::size_t len : block_lengths) {
            require(len >= 1, ErrorKind::Validation, "block lengths must be >= 1");
        }
        require(std::accumulate(block_lengths.begin(), block_lengths.end(), std::size_t{0}) == n_frames,
                ErrorKind::Validation, "block_lengths must sum to n_frames");
    }
}

std::vector<std::size_t> planted_labels(const SyntheticSpec& spec) {
    spec.validate();
    std::vector<std::size_t> labels(spec.n_frames);
    if (spec.block_lengths.empty()) {
        for (std::size_t f = 0; f < spec.n_frames; ++f) {
            // Block b covers [floor(b*N/S), floor((b+1)*N/S)).
            labels[f] = ((f + 1) * spec.n_scenes - 1) / spec.n_frames;
        }
    } else {
        std::size_t f = 0;
        for (std::size_t b = 0; b < spec.block_lengths.size(); ++b) {
            for (std::size_t i = 0; i < spec.block_lengths[b]; ++i) {
                labels[f++] = b;
            }
        }
    }
    return labels;
}

FrameFeatures generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    const std::size_t S = spec.n_scenes;
    const std::size_t L = spec.n_patches;
    const std::size_t D = spec.dim;

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> unit(0.0, 1.0);

    // Block centers in representative space.
    Matrix centers(S, D);
    for (double& v : centers.values()) {
        v = unit(rng);
    }
    if (S >= 2) {
        double min_dist = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < S; ++a) {
            for (std::size_t b = a + 1; b < S; ++b) {
                min_dist = std::min(min_dist, std::sqrt(squared_distance(centers.row(a), centers.row(b))));
            }
        }
        // 5% headroom over the guaranteed separation absorbs float rounding.
        const double wanted = 1.05 * 10.0 * spec.noise_sigma * std::sqrt(static_cast<double>(D));
        if (min_dist < wanted) {
            const double scale = wanted / min_dist;
            for (double& v : centers.values()) {
                v *= scale;
            }
        }
    }

    // Per-block patch offsets with zero mean over patches, so the block's
    // representative feature is exactly its center.
    std::vector<Matrix> offsets(S, Matrix(L, D));
    for (std::size_t b = 0; b < S; ++b) {
        Matrix& off = offsets[b];
        for (double& v : off.values()) {
            v = unit(rng);
        }
        if (L >= 2) {
            for (std::size_t d = 0; d < D; ++d) {
                double mean = 0.0;
                for (std::size_t l = 0; l < L; ++l) {
                    mean += off(l, d);
                }
                mean /= static_cast<double>(L);
                for (std::size_t l = 0; l < L; ++l) {
                    off(l, d) -= mean;
                }
            }
        } else {
            std::fill(off.values().begin(), off.values().end(), 0.0);
        }
    }

    const auto labels = planted_labels(spec);
    Tensor3f data(Shape3{spec.n_frames, L, D});
    std::normal_distribution<double> noise(0.0, 1.0);
    for (std::size_t f = 0; f < spec.n_frames; ++f) {
        const std::size_t b = labels[f];
        for (std::size_t l = 0; l < L; ++l) {
            for (std::size_t d = 0; d < D; ++d) {
                double v = centers(b, d) + offsets[b](l, d);
                if (spec.noise_sigma > 0.0) {
                    v += spec.noise_sigma * noise(rng);
                }
                data(f, l, d) = static_cast<float>(v);
            }
        }
    }
    return FrameFeatures{std::move(data), std::nullopt};
}

}  // namespace scenetok
