// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "scenetok/tensor.hpp"

namespace scenetok {

struct SyntheticSpec {
    std::size_t n_frames = 0;
    std::size_t n_patches = 0;
    std::size_t dim = 0;
    std::size_t n_scenes = 0;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    // Optional explicit block lengths (must sum to n_frames, one per scene).
    // Empty means near-equal contiguous blocks.
    std::vector<std::size_t> block_lengths;

    void validate() const;
};

/// Scene id of every frame for the block layout `spec` produces.
std::vector<std::size_t> planted_labels(const SyntheticSpec& spec);

/// Frames grouped into contiguous scene blocks; each frame is the block's base
/// pattern plus i.i.d. N(0, noise_sigma^2) noise. Block means in representative
/// space are at least 10 * noise_sigma * sqrt(dim) apart.
FrameFeatures generate_synthetic(const SyntheticSpec& spec);

}  // namespace scenetok
