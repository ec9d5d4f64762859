// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenetok/serialization.hpp"

namespace scenetok {

using nlohmann::json;

namespace {

// Field access that reports schema problems as Format errors.
const json& field(const json& j, const char* key, const std::string& where) {
    require(j.is_object(), ErrorKind::Format, where + ": expected an object");
    const auto it = j.find(key);
    require(it != j.end(), ErrorKind::Format, where + ": missing field '" + key + "'");
    return *it;
}

std::size_t count_field(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    require(v.is_number_integer() && v.get<long long>() >= 0, ErrorKind::Format,
            where + ": '" + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

std::string string_field(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    require(v.is_string(), ErrorKind::Format, where + ": '" + key + "' must be a string");
    return v.get<std::string>();
}

double number_field(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    require(v.is_number(), ErrorKind::Format, where + ": '" + key + "' must be a number");
    return v.get<double>();
}

json histogram_json(const Histogram& h) {
    return json{{"lo", h.lo}, {"bin_width", h.bin_width}, {"counts", h.counts}, {"total", h.total()}};
}

}  // namespace

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Parse, what + ": invalid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

json to_json(const SceneSet& scenes) {
    json list = json::array();
    for (const auto& s : scenes.scenes) {
        list.push_back(json{{"representative", s.representative}, {"members", s.members}});
    }
    return json{{"k", scenes.k}, {"r", scenes.r}, {"scenes", list}, {"warnings", scenes.warnings}};
}

SceneSet scene_set_from_json(const json& j) {
    SceneSet out;
    out.k = count_field(j, "k", "scene set");
    out.r = count_field(j, "r", "scene set");
    const json& list = field(j, "scenes", "scene set");
    require(list.is_array(), ErrorKind::Format, "scene set: 'scenes' must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = "scene " + std::to_string(i);
        Scene s;
        s.representative = count_field(list[i], "representative", where);
        const json& members = field(list[i], "members", where);
        require(members.is_array(), ErrorKind::Format, where + ": 'members' must be an array");
        for (const auto& m : members) {
            require(m.is_number_integer() && m.get<long long>() >= 0, ErrorKind::Format,
                    where + ": members must be non-negative integers");
            s.members.push_back(m.get<std::size_t>());
        }
        out.scenes.push_back(std::move(s));
    }
    if (j.contains("warnings")) {
        for (const auto& w : j.at("warnings")) {
            require(w.is_string(), ErrorKind::Format, "scene set: warnings must be strings");
            out.warnings.push_back(w.get<std::string>());
        }
    }
    return out;
}

json to_json(const CompressConfig& c) {
    return json{{"input_frames", c.input_frames},
                {"scenes_k", c.scenes_k},
                {"supplements_r", c.supplements_r},
                {"selection", std::string(to_string(c.selection))},
                {"merging", std::string(to_string(c.merging))},
                {"seed", c.seed}};
}

CompressConfig compress_config_from_json(const json& j) {
    const std::string where = "compress config";
    CompressConfig c;
    c.input_frames = count_field(j, "input_frames", where);
    c.scenes_k = count_field(j, "scenes_k", where);
    c.supplements_r = count_field(j, "supplements_r", where);
    if (j.contains("selection")) {
        c.selection = parse_selection_method(string_field(j, "selection", where));
    }
    if (j.contains("merging")) {
        c.merging = parse_merge_strategy(string_field(j, "merging", where));
    }
    if (j.contains("seed")) {
        const json& v = j.at("seed");
        require(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0), ErrorKind::Format,
                where + ": 'seed' must be a non-negative integer");
        c.seed = v.get<std::uint64_t>();
    }
    return c;
}

json to_json(const BenchEntry& e) {
    return json{{"config", to_json(e.config)},
                {"out_frames", e.out_frames},
                {"wall_ms", e.wall_ms},
                {"recon_mse", e.recon_mse}};
}

json to_json(const std::vector<BenchEntry>& entries) {
    json out = json::array();
    for (const auto& e : entries) {
        out.push_back(to_json(e));
    }
    return out;
}

json to_json(const LongVideoRecord& r) {
    json segments = json::array();
    for (const auto& s : r.segments) {
        segments.push_back(json{{"start_s", s.start_s}, {"end_s", s.end_s}, {"caption", s.caption}});
    }
    return json{{"clip_ids", r.clip_ids},
                {"total_duration_s", r.total_duration_s},
                {"segments", segments},
                {"merged_caption", r.merged_caption},
                {"instruction", r.instruction}};
}

LongVideoRecord long_video_record_from_json(const json& j) {
    const std::string where = "long video record";
    LongVideoRecord r;
    const json& ids = field(j, "clip_ids", where);
    require(ids.is_array(), ErrorKind::Format, where + ": 'clip_ids' must be an array");
    for (const auto& id : ids) {
        require(id.is_string(), ErrorKind::Format, where + ": clip ids must be strings");
        r.clip_ids.push_back(id.get<std::string>());
    }
    r.total_duration_s = number_field(j, "total_duration_s", where);
    const json& segments = field(j, "segments", where);
    require(segments.is_array(), ErrorKind::Format, where + ": 'segments' must be an array");
    for (const auto& s : segments) {
        r.segments.push_back(
            {number_field(s, "start_s", "segment"), number_field(s, "end_s", "segment"), string_field(s, "caption", "segment")});
    }
    r.merged_caption = string_field(j, "merged_caption", where);
    r.instruction = string_field(j, "instruction", where);
    return r;
}

json to_json(const std::vector<LongVideoRecord>& records) {
    json out = json::array();
    for (const auto& r : records) {
        out.push_back(to_json(r));
    }
    return out;
}

json to_json(const DatasetStats& stats) {
    return json{{"records", stats.records},
                {"mean_duration_s", stats.mean_duration_s},
                {"mean_words", stats.mean_words},
                {"duration_histogram", histogram_json(stats.duration)},
                {"word_histogram", histogram_json(stats.words)}};
}

std::vector<ClipRecord> parse_clip_manifest(const std::string& text) {
    const json j = parse_json(text, "manifest");
    require(j.is_array(), ErrorKind::Format, "manifest: expected a JSON array of clips");
    std::vector<ClipRecord> clips;
    clips.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string where = "manifest entry " + std::to_string(i);
        clips.push_back(
            {string_field(j[i], "id", where), number_field(j[i], "duration", where), string_field(j[i], "caption", where)});
    }
    return clips;
}

}  // namespace scenetok
