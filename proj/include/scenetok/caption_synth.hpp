// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace scenetok {

struct ClipRecord {
    std::string id;
    double duration_s = 0.0;
    std::string caption;

    void validate() const;
};

struct CaptionSegment {
    double start_s = 0.0;
    double end_s = 0.0;
    std::string caption;

    bool operator==(const CaptionSegment&) const = default;
};

struct LongVideoRecord {
    std::vector<std::string> clip_ids;
    double total_duration_s = 0.0;
    std::vector<CaptionSegment> segments;
    std::string merged_caption;
    std::string instruction;

    bool operator==(const LongVideoRecord&) const = default;
};

inline constexpr double kMinLongVideoSeconds = 300.0;
inline constexpr double kMaxLongVideoSeconds = 1800.0;
inline constexpr std::size_t kInstructionFrames = 32;

struct PackOptions {
    double min_s = kMinLongVideoSeconds;
    double max_s = kMaxLongVideoSeconds;
    std::uint64_t seed = 0;
    std::size_t instruction_frames = kInstructionFrames;
};

struct PackResult {
    std::vector<LongVideoRecord> records;
    std::vector<std::string> warnings;
};

/// Seeded shuffle, then greedy packing: clips accumulate while the running
/// total stays within max_s; a group closes when the next clip would overflow
/// it and is kept only if it reached min_s.
PackResult pack_clips(const std::vector<ClipRecord>& pool, const PackOptions& options = {});

LongVideoRecord build_record(const std::vector<ClipRecord>& clips, std::size_t instruction_frames = kInstructionFrames,
                             double min_s = kMinLongVideoSeconds, double max_s = kMaxLongVideoSeconds);

/// "[MM:SS - MM:SS]" with seconds rounded half-up.
std::string format_span(double start_s, double end_s);

std::string render_frame_instruction(std::size_t n_frames, double total_s, const std::vector<double>& timestamps);

struct ParsedInstruction {
    std::size_t n_frames = 0;
    long total_s = 0;
    std::vector<double> timestamps;
};

ParsedInstruction parse_frame_instruction(const std::string& text);

/// t_j = j * total_s / n.
std::vector<double> sample_timestamps(double total_s, std::size_t n);

struct Histogram {
    double lo = 0.0;
    double bin_width = 0.0;
    std::vector<std::size_t> counts;

    std::size_t total() const;
};

struct DatasetStats {
    std::size_t records = 0;
    double mean_duration_s = 0.0;
    double mean_words = 0.0;
    Histogram duration;  // 60 s bins over [300, 1800]
    Histogram words;     // caption word counts
};

std::size_t caption_word_count(const LongVideoRecord& record);

DatasetStats dataset_stats(const std::vector<LongVideoRecord>& records);

std::string format_stats_table(const DatasetStats& stats);

/// Deterministic clip pool for demos and tests: durations in [min_s, max_s].
std::vector<ClipRecord> synthetic_clip_pool(std::size_t count, std::uint64_t seed, double min_s = 10.0,
                                            double max_s = 180.0);

}  // namespace scenetok
