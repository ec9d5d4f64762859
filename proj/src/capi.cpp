// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenetok/scenetok.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "scenetok/caption_synth.hpp"
#include "scenetok/feature_io.hpp"
#include "scenetok/pipeline.hpp"
#include "scenetok/serialization.hpp"
#include "scenetok/synthetic.hpp"

struct st_features {
    scenetok::FrameFeatures value;
};

struct st_scene_set {
    scenetok::SceneSet value;
};

namespace {

thread_local std::string g_last_error;

st_status to_status(scenetok::ErrorKind kind) {
    using scenetok::ErrorKind;
    switch (kind) {
    case ErrorKind::Format:
        return ST_ERR_FORMAT;
    case ErrorKind::Length:
        return ST_ERR_LENGTH;
    case ErrorKind::Validation:
        return ST_ERR_VALIDATION;
    case ErrorKind::Parameter:
        return ST_ERR_PARAMETER;
    case ErrorKind::Degenerate:
        return ST_ERR_DEGENERATE;
    case ErrorKind::Io:
        return ST_ERR_IO;
    case ErrorKind::Parse:
        return ST_ERR_PARSE;
    }
    return ST_ERR_INTERNAL;
}

template <typename F>
st_status guarded(F&& body) noexcept {
    try {
        body();
        g_last_error.clear();
        return ST_OK;
    } catch (const scenetok::Error& e) {
        g_last_error = e.what();
        return to_status(e.kind());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return ST_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return ST_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return ST_ERR_INTERNAL;
    }
}

void not_null(const void* p, const char* name) {
    scenetok::require(p != nullptr, scenetok::ErrorKind::Parameter, std::string(name) + " must not be null");
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

scenetok::SelectionMethod to_cpp(st_selection s) {
    switch (s) {
    case ST_SELECT_UNIFORM:
        return scenetok::SelectionMethod::Uniform;
    case ST_SELECT_KMEANS:
        return scenetok::SelectionMethod::KMeans;
    case ST_SELECT_BSM:
        return scenetok::SelectionMethod::Bsm;
    }
    scenetok::fail(scenetok::ErrorKind::Parameter, "unknown selection method " + std::to_string(static_cast<int>(s)));
}

scenetok::MergeStrategy to_cpp(st_merge m) {
    switch (m) {
    case ST_MERGE_TAVG:
        return scenetok::MergeStrategy::TemporalAverage;
    case ST_MERGE_FUSION:
        return scenetok::MergeStrategy::WeightedFusion;
    case ST_MERGE_ATTNPOOL:
        return scenetok::MergeStrategy::AttentionPool;
    case ST_MERGE_BSM:
        return scenetok::MergeStrategy::Bsm;
    }
    scenetok::fail(scenetok::ErrorKind::Parameter, "unknown merge strategy " + std::to_string(static_cast<int>(m)));
}

st_selection to_c(scenetok::SelectionMethod s) {
    switch (s) {
    case scenetok::SelectionMethod::Uniform:
        return ST_SELECT_UNIFORM;
    case scenetok::SelectionMethod::KMeans:
        return ST_SELECT_KMEANS;
    case scenetok::SelectionMethod::Bsm:
        return ST_SELECT_BSM;
    }
    return ST_SELECT_KMEANS;
}

st_merge to_c(scenetok::MergeStrategy m) {
    switch (m) {
    case scenetok::MergeStrategy::TemporalAverage:
        return ST_MERGE_TAVG;
    case scenetok::MergeStrategy::WeightedFusion:
        return ST_MERGE_FUSION;
    case scenetok::MergeStrategy::AttentionPool:
        return ST_MERGE_ATTNPOOL;
    case scenetok::MergeStrategy::Bsm:
        return ST_MERGE_BSM;
    }
    return ST_MERGE_FUSION;
}

scenetok::CompressConfig to_cpp(const st_compress_config& c) {
    scenetok::CompressConfig out;
    out.input_frames = c.input_frames;
    out.scenes_k = c.scenes_k;
    out.supplements_r = c.supplements_r;
    out.selection = to_cpp(c.selection);
    out.merging = to_cpp(c.merging);
    out.seed = c.seed;
    return out;
}

st_compress_config to_c(const scenetok::CompressConfig& c) {
    return st_compress_config{c.input_frames, c.scenes_k,     c.supplements_r,
                              to_c(c.selection), to_c(c.merging), c.seed};
}

std::optional<scenetok::FusionWeights> weights_from(const st_features* w) {
    if (!w) {
        return std::nullopt;
    }
    const auto& t = w->value.data;
    std::vector<double> values(t.values().begin(), t.values().end());
    return scenetok::FusionWeights{scenetok::Tensor3d(t.shape(), std::move(values))};
}

}  // namespace

extern "C" {

const char* st_version(void) { return "0.1.0"; }

const char* st_last_error(void) { return g_last_error.c_str(); }

const char* st_status_string(st_status status) {
    switch (status) {
    case ST_OK:
        return "ok";
    case ST_ERR_FORMAT:
        return "format error";
    case ST_ERR_LENGTH:
        return "length error";
    case ST_ERR_VALIDATION:
        return "validation error";
    case ST_ERR_PARAMETER:
        return "parameter error";
    case ST_ERR_DEGENERATE:
        return "degenerate input";
    case ST_ERR_IO:
        return "I/O error";
    case ST_ERR_PARSE:
        return "parse error";
    case ST_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

void st_string_free(char* s) { std::free(s); }

st_status st_parse_selection(const char* name, st_selection* out) {
    return guarded([&] {
        not_null(name, "name");
        not_null(out, "out");
        *out = to_c(scenetok::parse_selection_method(name));
    });
}

st_status st_parse_merge(const char* name, st_merge* out) {
    return guarded([&] {
        not_null(name, "name");
        not_null(out, "out");
        *out = to_c(scenetok::parse_merge_strategy(name));
    });
}

st_status st_features_create(size_t frames, size_t patches, size_t dim, const float* data, st_features** out) {
    return guarded([&] {
        not_null(data, "data");
        not_null(out, "out");
        *out = nullptr;
        const scenetok::Shape3 shape{frames, patches, dim};
        scenetok::Tensor3f tensor(shape);
        std::memcpy(tensor.values().data(), data, shape.size() * sizeof(float));
        scenetok::FrameFeatures f{std::move(tensor), std::nullopt};
        f.validate();
        *out = new st_features{std::move(f)};
    });
}

st_status st_features_load(const char* path, st_features** out) {
    return guarded([&] {
        not_null(path, "path");
        not_null(out, "out");
        *out = nullptr;
        *out = new st_features{scenetok::load_features(path)};
    });
}

st_status st_features_save(const st_features* features, const char* path) {
    return guarded([&] {
        not_null(features, "features");
        not_null(path, "path");
        scenetok::save_features(features->value, path);
    });
}

st_status st_features_shape(const st_features* features, size_t* frames, size_t* patches, size_t* dim) {
    return guarded([&] {
        not_null(features, "features");
        const auto& s = features->value.data.shape();
        if (frames) {
            *frames = s.d0;
        }
        if (patches) {
            *patches = s.d1;
        }
        if (dim) {
            *dim = s.d2;
        }
    });
}

const float* st_features_data(const st_features* features) {
    return features ? features->value.data.values().data() : nullptr;
}

st_status st_features_set_timestamps(st_features* features, const double* timestamps, size_t count) {
    return guarded([&] {
        not_null(features, "features");
        scenetok::FrameFeatures updated = features->value;
        if (timestamps) {
            updated.frame_timestamps = std::vector<double>(timestamps, timestamps + count);
        } else {
            updated.frame_timestamps.reset();
        }
        updated.validate();
        features->value = std::move(updated);
    });
}

int st_features_has_timestamps(const st_features* features) {
    return features && features->value.frame_timestamps ? 1 : 0;
}

void st_features_free(st_features* features) { delete features; }

st_status st_generate_synthetic(const st_synthetic_spec* spec, st_features** out) {
    return guarded([&] {
        not_null(spec, "spec");
        not_null(out, "out");
        *out = nullptr;
        scenetok::SyntheticSpec s;
        s.n_frames = spec->n_frames;
        s.n_patches = spec->n_patches;
        s.dim = spec->dim;
        s.n_scenes = spec->n_scenes;
        s.noise_sigma = spec->noise_sigma;
        s.seed = spec->seed;
        if (spec->block_lengths && spec->n_block_lengths > 0) {
            s.block_lengths.assign(spec->block_lengths, spec->block_lengths + spec->n_block_lengths);
        }
        *out = new st_features{scenetok::generate_synthetic(s)};
    });
}

st_status st_select_scenes(const st_features* features, st_selection method, size_t k, size_t r, uint64_t seed,
                           st_scene_set** out) {
    return guarded([&] {
        not_null(features, "features");
        not_null(out, "out");
        *out = nullptr;
        const auto& f = features->value;
        scenetok::SceneSet scenes;
        switch (to_cpp(method)) {
        case scenetok::SelectionMethod::Uniform:
            scenetok::require(k >= 1 && k * (r + 1) <= f.frames(), scenetok::ErrorKind::Parameter,
                              "cannot form " + std::to_string(k) + " scenes of " + std::to_string(r + 1) +
                                  " frames from " + std::to_string(f.frames()) + " frames");
            scenes = scenetok::group_uniform_scenes(scenetok::uniform_sample_indices(f.frames(), k * (r + 1)), r + 1);
            break;
        case scenetok::SelectionMethod::KMeans: {
            scenetok::SelectParams params;
            params.kmeans.seed = seed;
            scenes = scenetok::select_scenes_kmeans(f, k, r, params);
            break;
        }
        case scenetok::SelectionMethod::Bsm:
            scenes = scenetok::select_scenes_bsm(f, k, r);
            break;
        }
        *out = new st_scene_set{std::move(scenes)};
    });
}

size_t st_scene_set_count(const st_scene_set* scenes) { return scenes ? scenes->value.scenes.size() : 0; }

st_status st_scene_set_scene(const st_scene_set* scenes, size_t index, size_t* representative,
                             const size_t** members, size_t* n_members) {
    return guarded([&] {
        not_null(scenes, "scenes");
        scenetok::require(index < scenes->value.scenes.size(), scenetok::ErrorKind::Parameter,
                          "scene index out of range");
        const auto& s = scenes->value.scenes[index];
        if (representative) {
            *representative = s.representative;
        }
        if (members) {
            *members = s.members.data();
        }
        if (n_members) {
            *n_members = s.members.size();
        }
    });
}

size_t st_scene_set_warning_count(const st_scene_set* scenes) {
    return scenes ? scenes->value.warnings.size() : 0;
}

st_status st_scene_set_to_json(const st_scene_set* scenes, char** out_json) {
    return guarded([&] {
        not_null(scenes, "scenes");
        not_null(out_json, "out_json");
        *out_json = dup_string(scenetok::to_json(scenes->value).dump(2) + "\n");
    });
}

void st_scene_set_free(st_scene_set* scenes) { delete scenes; }

st_status st_merge_scene(const st_features* scene, st_merge strategy, const st_features* fusion_weights,
                         uint64_t seed, st_features** out) {
    return guarded([&] {
        not_null(scene, "scene");
        not_null(out, "out");
        *out = nullptr;
        scenetok::MergeParams params;
        params.seed = seed;
        params.fusion_weights = weights_from(fusion_weights);
        const scenetok::Matrix merged = scenetok::merge_scene(scene->value.data, to_cpp(strategy), params);
        scenetok::Tensor3f tensor(scenetok::Shape3{1, merged.rows(), merged.cols()});
        auto dst = tensor.values();
        const auto src = merged.values();
        for (std::size_t i = 0; i < dst.size(); ++i) {
            dst[i] = static_cast<float>(src[i]);
        }
        *out = new st_features{scenetok::FrameFeatures{std::move(tensor), std::nullopt}};
    });
}

void st_compress_config_default(st_compress_config* config) {
    if (config) {
        *config = to_c(scenetok::CompressConfig{});
    }
}

st_status st_compress_config_from_json(const char* json, st_compress_config* config) {
    return guarded([&] {
        not_null(json, "json");
        not_null(config, "config");
        *config = to_c(scenetok::compress_config_from_json(scenetok::parse_json(json, "compress config")));
    });
}

st_status st_compress(const st_features* features, const st_compress_config* config,
                      const st_features* fusion_weights, st_features** out) {
    return guarded([&] {
        not_null(features, "features");
        not_null(config, "config");
        not_null(out, "out");
        *out = nullptr;
        auto result = scenetok::compress(features->value, to_cpp(*config), weights_from(fusion_weights));
        *out = new st_features{std::move(result.features)};
    });
}

st_status st_bench(const st_features* features, const char* configs_json, int record_timing, char** out_report_json,
                   char** out_table) {
    return guarded([&] {
        not_null(features, "features");
        not_null(configs_json, "configs_json");
        const auto j = scenetok::parse_json(configs_json, "bench configs");
        scenetok::require(j.is_array(), scenetok::ErrorKind::Format, "bench configs: expected a JSON array");
        scenetok::require(!j.empty(), scenetok::ErrorKind::Parameter, "bench configs: empty config list");
        std::vector<scenetok::CompressConfig> configs;
        for (const auto& c : j) {
            configs.push_back(scenetok::compress_config_from_json(c));
        }
        const auto entries = scenetok::bench(features->value, configs, record_timing != 0);
        char* report = out_report_json ? dup_string(scenetok::to_json(entries).dump(2) + "\n") : nullptr;
        try {
            if (out_table) {
                *out_table = dup_string(scenetok::format_bench_table(entries));
            }
        } catch (...) {
            std::free(report);
            throw;
        }
        if (out_report_json) {
            *out_report_json = report;
        }
    });
}

st_status st_synth(const char* manifest_json, double min_s, double max_s, size_t instruction_frames, uint64_t seed,
                   char** out_records_json, char** out_warnings_json) {
    return guarded([&] {
        not_null(manifest_json, "manifest_json");
        const auto clips = scenetok::parse_clip_manifest(manifest_json);
        scenetok::PackOptions options;
        options.min_s = min_s;
        options.max_s = max_s;
        options.seed = seed;
        options.instruction_frames = instruction_frames;
        const auto packed = scenetok::pack_clips(clips, options);
        char* records = out_records_json ? dup_string(scenetok::to_json(packed.records).dump(2) + "\n") : nullptr;
        try {
            if (out_warnings_json) {
                *out_warnings_json = dup_string(nlohmann::json(packed.warnings).dump(2) + "\n");
            }
        } catch (...) {
            std::free(records);
            throw;
        }
        if (out_records_json) {
            *out_records_json = records;
        }
    });
}

st_status st_dataset_stats(const char* records_json, char** out_stats_json, char** out_table) {
    return guarded([&] {
        not_null(records_json, "records_json");
        const auto j = scenetok::parse_json(records_json, "records");
        scenetok::require(j.is_array(), scenetok::ErrorKind::Format, "records: expected a JSON array");
        std::vector<scenetok::LongVideoRecord> records;
        for (const auto& r : j) {
            records.push_back(scenetok::long_video_record_from_json(r));
        }
        const auto stats = scenetok::dataset_stats(records);
        char* stats_json = out_stats_json ? dup_string(scenetok::to_json(stats).dump(2) + "\n") : nullptr;
        try {
            if (out_table) {
                *out_table = dup_string(scenetok::format_stats_table(stats));
            }
        } catch (...) {
            std::free(stats_json);
            throw;
        }
        if (out_stats_json) {
            *out_stats_json = stats_json;
        }
    });
}

}  // extern "C"
