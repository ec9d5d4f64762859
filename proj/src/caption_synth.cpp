// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenetok/caption_synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "scenetok/error.hpp"

namespace scenetok {

namespace {

long round_half_up(double x) { return static_cast<long>(std::floor(x + 0.5)); }

std::string format_tenths(double t) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", t);
    return buf;
}

void check_timestamps(double total_s, const std::vector<double>& ts) {
    require(std::isfinite(total_s) && total_s >= 0.0, ErrorKind::Parameter, "total duration must be non-negative");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        require(std::isfinite(ts[i]) && ts[i] >= 0.0 && ts[i] <= total_s, ErrorKind::Parameter,
                "timestamp " + std::to_string(i) + " lies outside [0, " + format_tenths(total_s) + "]");
        require(i == 0 || ts[i - 1] < ts[i], ErrorKind::Parameter,
                "timestamps must be strictly increasing (index " + std::to_string(i) + ")");
    }
}

std::size_t count_words(const std::string& text) {
    std::istringstream in(text);
    std::string word;
    std::size_t n = 0;
    while (in >> word) {
        ++n;
    }
    return n;
}

}  // namespace

void ClipRecord::validate() const {
    require(!id.empty(), ErrorKind::Validation, "clip id must be non-empty");
    require(std::isfinite(duration_s) && duration_s > 0.0, ErrorKind::Validation,
            "clip " + id + ": duration must be positive");
    require(!caption.empty(), ErrorKind::Validation, "clip " + id + ": caption must be non-empty");
}

std::string format_span(double start_s, double end_s) {
    const long a = round_half_up(start_s);
    const long b = round_half_up(end_s);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "[%02ld:%02ld - %02ld:%02ld]", a / 60, a % 60, b / 60, b % 60);
    return buf;
}

std::vector<double> sample_timestamps(double total_s, std::size_t n) {
    require(n >= 1, ErrorKind::Parameter, "sample_timestamps: n must be >= 1");
    require(std::isfinite(total_s) && total_s >= 0.0, ErrorKind::Parameter,
            "sample_timestamps: total must be non-negative");
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = static_cast<double>(j) * total_s / static_cast<double>(n);
    }
    return out;
}

std::string render_frame_instruction(std::size_t n_frames, double total_s, const std::vector<double>& timestamps) {
    require(n_frames >= 1, ErrorKind::Parameter, "instruction needs at least one frame");
    require(timestamps.size() == n_frames, ErrorKind::Parameter,
            "instruction lists " + std::to_string(n_frames) + " frames but " + std::to_string(timestamps.size()) +
                " timestamps");
    check_timestamps(total_s, timestamps);

    std::string out = "This video samples " + std::to_string(n_frames) + " frames of a " +
                      std::to_string(round_half_up(total_s)) + "-second video at ";
    for (std::size_t i = 0; i < timestamps.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += format_tenths(timestamps[i]);
    }
    out += " seconds.";
    return out;
}

ParsedInstruction parse_frame_instruction(const std::string& text) {
    static const std::string kHead = "This video samples ";
    static const std::string kMid = " frames of a ";
    static const std::string kDur = "-second video at ";
    static const std::string kTail = " seconds.";

    auto bad = [&](const std::string& why) -> ParsedInstruction {
        fail(ErrorKind::Parse, "frame instruction: " + why);
    };
    if (text.rfind(kHead, 0) != 0) {
        return bad("missing prefix");
    }
    if (text.size() < kTail.size() || text.compare(text.size() - kTail.size(), kTail.size(), kTail) != 0) {
        return bad("missing suffix");
    }
    const std::size_t mid = text.find(kMid, kHead.size());
    const std::size_t dur = mid == std::string::npos ? std::string::npos : text.find(kDur, mid + kMid.size());
    if (dur == std::string::npos) {
        return bad("malformed header");
    }

    ParsedInstruction out;
    try {
        out.n_frames = std::stoul(text.substr(kHead.size(), mid - kHead.size()));
        out.total_s = std::stol(text.substr(mid + kMid.size(), dur - mid - kMid.size()));
        const std::size_t list_begin = dur + kDur.size();
        const std::string list = text.substr(list_begin, text.size() - kTail.size() - list_begin);
        std::size_t pos = 0;
        while (pos <= list.size()) {
            const std::size_t comma = list.find(", ", pos);
            const std::string item = list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            out.timestamps.push_back(std::stod(item));
            if (comma == std::string::npos) {
                break;
            }
            pos = comma + 2;
        }
    } catch (const std::logic_error&) {
        return bad("malformed number");
    }
    if (out.timestamps.size() != out.n_frames) {
        return bad("frame count does not match timestamp list");
    }
    return out;
}

LongVideoRecord build_record(const std::vector<ClipRecord>& clips, std::size_t instruction_frames, double min_s,
                             double max_s) {
    require(!clips.empty(), ErrorKind::Validation, "build_record: no clips");
    double total = 0.0;
    for (const auto& clip : clips) {
        clip.validate();
        total += clip.duration_s;
    }
    require(total >= min_s && total <= max_s, ErrorKind::Validation,
            "build_record: total duration " + format_tenths(total) + " s outside [" + format_tenths(min_s) + ", " +
                format_tenths(max_s) + "]");

    LongVideoRecord record;
    double start = 0.0;
    for (std::size_t i = 0; i < clips.size(); ++i) {
        const double end = i + 1 == clips.size() ? total : start + clips[i].duration_s;
        record.clip_ids.push_back(clips[i].id);
        record.segments.push_back({start, end, clips[i].caption});
        if (i > 0) {
            record.merged_caption += '\n';
        }
        record.merged_caption += format_span(start, end) + " " + clips[i].caption;
        start = end;
    }
    record.total_duration_s = total;
    record.instruction =
        render_frame_instruction(instruction_frames, total, sample_timestamps(total, instruction_frames));
    return record;
}

PackResult pack_clips(const std::vector<ClipRecord>& pool, const PackOptions& options) {
    require(!pool.empty(), ErrorKind::Parameter, "pack_clips: empty clip pool");
    require(options.min_s > 0.0 && options.min_s <= options.max_s, ErrorKind::Parameter,
            "pack_clips: need 0 < min_s <= max_s");

    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(options.seed);
    std::shuffle(order.begin(), order.end(), rng);

    PackResult result;
    std::set<std::string> seen;
    std::vector<ClipRecord> group;
    double total = 0.0;

    auto close_group = [&](bool exhausted) {
        if (group.empty()) {
            return;
        }
        if (total >= options.min_s) {
            result.records.push_back(build_record(group, options.instruction_frames, options.min_s, options.max_s));
        } else {
            result.warnings.push_back("dropped " + std::to_string(group.size()) + " clip(s) totalling " +
                                      format_tenths(total) + " s: below the " + format_tenths(options.min_s) +
                                      " s minimum" + (exhausted ? " at end of pool" : ""));
        }
        group.clear();
        total = 0.0;
    };

    for (std::size_t idx : order) {
        const ClipRecord& clip = pool[idx];
        try {
            clip.validate();
        } catch (const Error& e) {
            result.warnings.push_back(std::string("skipped invalid clip: ") + e.what());
            continue;
        }
        if (clip.duration_s >= options.max_s) {
            result.warnings.push_back("skipped clip " + clip.id + ": duration " + format_tenths(clip.duration_s) +
                                      " s is not below the " + format_tenths(options.max_s) + " s maximum");
            continue;
        }
        if (!seen.insert(clip.id).second) {
            result.warnings.push_back("skipped duplicate clip id " + clip.id);
            continue;
        }
        if (total + clip.duration_s > options.max_s) {
            close_group(false);
        }
        group.push_back(clip);
        total += clip.duration_s;
    }
    close_group(true);
    return result;
}

std::size_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

std::size_t caption_word_count(const LongVideoRecord& record) {
    std::size_t n = 0;
    for (const auto& seg : record.segments) {
        n += count_words(seg.caption);
    }
    return n;
}

DatasetStats dataset_stats(const std::vector<LongVideoRecord>& records) {
    require(!records.empty(), ErrorKind::Parameter, "dataset_stats: no records");
    constexpr double kDurationBin = 60.0;
    constexpr double kWordBin = 250.0;

    DatasetStats stats;
    stats.records = records.size();
    stats.duration.lo = kMinLongVideoSeconds;
    stats.duration.bin_width = kDurationBin;
    const auto duration_bins =
        static_cast<std::size_t>((kMaxLongVideoSeconds - kMinLongVideoSeconds) / kDurationBin);
    stats.duration.counts.assign(duration_bins, 0);

    std::vector<std::size_t> words;
    double duration_sum = 0.0;
    for (const auto& r : records) {
        duration_sum += r.total_duration_s;
        const double offset = (r.total_duration_s - stats.duration.lo) / kDurationBin;
        const auto bin = static_cast<std::size_t>(std::clamp(std::floor(offset), 0.0, double(duration_bins - 1)));
        ++stats.duration.counts[bin];
        words.push_back(caption_word_count(r));
    }
    stats.mean_duration_s = duration_sum / static_cast<double>(records.size());

    const std::size_t max_words = *std::max_element(words.begin(), words.end());
    stats.words.lo = 0.0;
    stats.words.bin_width = kWordBin;
    stats.words.counts.assign(static_cast<std::size_t>(static_cast<double>(max_words) / kWordBin) + 1, 0);
    double word_sum = 0.0;
    for (std::size_t w : words) {
        ++stats.words.counts[static_cast<std::size_t>(static_cast<double>(w) / kWordBin)];
        word_sum += static_cast<double>(w);
    }
    stats.mean_words = word_sum / static_cast<double>(records.size());
    return stats;
}

std::string format_stats_table(const DatasetStats& stats) {
    std::string out;
    char line[128];
    std::snprintf(line, sizeof(line), "records: %zu  mean duration: %.1f s  mean words: %.1f\n", stats.records,
                  stats.mean_duration_s, stats.mean_words);
    out += line;
    out += "duration bin (s)      count\n";
    for (std::size_t i = 0; i < stats.duration.counts.size(); ++i) {
        const double lo = stats.duration.lo + stats.duration.bin_width * static_cast<double>(i);
        std::snprintf(line, sizeof(line), "[%5.0f, %5.0f)  %10zu\n", lo, lo + stats.duration.bin_width,
                      stats.duration.counts[i]);
        out += line;
    }
    out += "caption words         count\n";
    for (std::size_t i = 0; i < stats.words.counts.size(); ++i) {
        const double lo = stats.words.lo + stats.words.bin_width * static_cast<double>(i);
        std::snprintf(line, sizeof(line), "[%5.0f, %5.0f)  %10zu\n", lo, lo + stats.words.bin_width,
                      stats.words.counts[i]);
        out += line;
    }
    return out;
}

std::vector<ClipRecord> synthetic_clip_pool(std::size_t count, std::uint64_t seed, double min_s, double max_s) {
    require(min_s > 0.0 && min_s <= max_s, ErrorKind::Parameter, "synthetic_clip_pool: need 0 < min_s <= max_s");
    static const char* const kSubjects[] = {"a person", "a dog", "two children", "a chef", "a cyclist", "the camera",
                                            "a crowd", "a woman", "a man", "a robot"};
    static const char* const kVerbs[] = {"walks", "pans", "cooks", "runs", "talks", "turns", "jumps", "waits",
                                         "points", "dances"};
    static const char* const kPlaces[] = {"across a street", "in a kitchen", "along a beach", "inside a workshop",
                                          "through a park", "near a window", "on a stage", "under a bridge"};

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> duration(min_s, max_s);
    std::uniform_int_distribution<int> sentences(1, 4);
    std::uniform_int_distribution<std::size_t> subject(0, std::size(kSubjects) - 1);
    std::uniform_int_distribution<std::size_t> verb(0, std::size(kVerbs) - 1);
    std::uniform_int_distribution<std::size_t> place(0, std::size(kPlaces) - 1);

    std::vector<ClipRecord> pool;
    pool.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        char id[32];
        std::snprintf(id, sizeof(id), "clip_%05zu", i);
        // Tenth-of-a-second durations keep manifests readable.
        const double d = std::max(min_s, std::round(duration(rng) * 10.0) / 10.0);
        std::string caption;
        const int n = sentences(rng);
        for (int s = 0; s < n; ++s) {
            if (s > 0) {
                caption += ' ';
            }
            std::string sentence = std::string(kSubjects[subject(rng)]) + " " + kVerbs[verb(rng)] + " " +
                                   kPlaces[place(rng)] + ".";
            sentence[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(sentence[0])));
            caption += sentence;
        }
        pool.push_back({id, std::min(d, max_s), caption});
    }
    return pool;
}

}  // namespace scenetok
