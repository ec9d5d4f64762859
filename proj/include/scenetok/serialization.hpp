// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// JSON shapes for the CLI and C API.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scenetok/caption_synth.hpp"
#include "scenetok/pipeline.hpp"
#include "scenetok/scene_select.hpp"

namespace scenetok {

nlohmann::json to_json(const SceneSet& scenes);
SceneSet scene_set_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CompressConfig& config);
CompressConfig compress_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BenchEntry& entry);
nlohmann::json to_json(const std::vector<BenchEntry>& entries);

nlohmann::json to_json(const LongVideoRecord& record);
LongVideoRecord long_video_record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const std::vector<LongVideoRecord>& records);

nlohmann::json to_json(const DatasetStats& stats);

/// Parses a JSON array of {"id", "duration", "caption"}. Syntax errors are
/// reported as ErrorKind::Parse with the byte offset.
std::vector<ClipRecord> parse_clip_manifest(const std::string& text);

/// Parses text as JSON, mapping syntax errors to ErrorKind::Parse.
nlohmann::json parse_json(const std::string& text, const std::string& what);

}  // namespace scenetok
