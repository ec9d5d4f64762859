// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// FVT1 feature files.
//
//   offset  size       field
//   0       4          magic "FVT1"
//   4       1          version (1)
//   5       4          rank, u32 LE (always 3)
//   9       4 * rank   dims, u32 LE (N, L, D)
//   21      4 * N*L*D  float32 LE payload, row-major
//
// Frame timestamps, when present, live in a "<path>.meta.json" sidecar as
// {"frame_timestamps": [...]}.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "scenetok/tensor.hpp"

namespace scenetok {

inline constexpr char kFvtMagic[4] = {'F', 'V', 'T', '1'};
inline constexpr std::uint8_t kFvtVersion = 1;
inline constexpr std::size_t kFvtHeaderBytes = 4 + 1 + 4 + 3 * 4;

std::vector<std::uint8_t> encode_fvt(const Tensor3f& tensor);
Tensor3f decode_fvt(std::span<const std::uint8_t> bytes);

FrameFeatures load_features(const std::filesystem::path& path);
void save_features(const FrameFeatures& features, const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace scenetok
