// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

/*
 * C interface to scenetok.
 *
 * Every handle is opaque and owned by the caller once returned; release it
 * with the matching *_free function. Functions return ST_OK or an error
 * status; st_last_error() then describes the most recent failure on the
 * calling thread. Strings returned through char** out-parameters are
 * heap-allocated and must be released with st_string_free().
 */

#ifndef SCENETOK_SCENETOK_H
#define SCENETOK_SCENETOK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SCENETOK_BUILDING_LIBRARY)
#    define SCENETOK_API __declspec(dllexport)
#  else
#    define SCENETOK_API __declspec(dllimport)
#  endif
#else
#  define SCENETOK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum st_status {
    ST_OK = 0,
    ST_ERR_FORMAT = 1,
    ST_ERR_LENGTH = 2,
    ST_ERR_VALIDATION = 3,
    ST_ERR_PARAMETER = 4,
    ST_ERR_DEGENERATE = 5,
    ST_ERR_IO = 6,
    ST_ERR_PARSE = 7,
    ST_ERR_INTERNAL = 99
} st_status;

typedef enum st_selection {
    ST_SELECT_UNIFORM = 0,
    ST_SELECT_KMEANS = 1,
    ST_SELECT_BSM = 2
} st_selection;

typedef enum st_merge {
    ST_MERGE_TAVG = 0,
    ST_MERGE_FUSION = 1,
    ST_MERGE_ATTNPOOL = 2,
    ST_MERGE_BSM = 3
} st_merge;

typedef struct st_features st_features;
typedef struct st_scene_set st_scene_set;

typedef struct st_synthetic_spec {
    size_t n_frames;
    size_t n_patches;
    size_t dim;
    size_t n_scenes;
    double noise_sigma;
    uint64_t seed;
    /* Optional: one length per scene, summing to n_frames. NULL for equal blocks. */
    const size_t* block_lengths;
    size_t n_block_lengths;
} st_synthetic_spec;

typedef struct st_compress_config {
    size_t input_frames;
    size_t scenes_k;
    size_t supplements_r;
    st_selection selection;
    st_merge merging;
    uint64_t seed;
} st_compress_config;

SCENETOK_API const char* st_version(void);
SCENETOK_API const char* st_last_error(void);
SCENETOK_API const char* st_status_string(st_status status);
SCENETOK_API void st_string_free(char* s);

/* "uniform" | "kmeans" | "bsm" */
SCENETOK_API st_status st_parse_selection(const char* name, st_selection* out);
/* "tavg" | "fusion" | "attnpool" | "bsm" */
SCENETOK_API st_status st_parse_merge(const char* name, st_merge* out);

/* Frame features: float32 tensor (frames, patches, dim). */
SCENETOK_API st_status st_features_create(size_t frames, size_t patches, size_t dim, const float* data,
                                          st_features** out);
SCENETOK_API st_status st_features_load(const char* path, st_features** out);
SCENETOK_API st_status st_features_save(const st_features* features, const char* path);
SCENETOK_API st_status st_features_shape(const st_features* features, size_t* frames, size_t* patches, size_t* dim);
/* Row-major payload, valid until the handle is freed. */
SCENETOK_API const float* st_features_data(const st_features* features);
SCENETOK_API st_status st_features_set_timestamps(st_features* features, const double* timestamps, size_t count);
SCENETOK_API int st_features_has_timestamps(const st_features* features);
SCENETOK_API void st_features_free(st_features* features);

SCENETOK_API st_status st_generate_synthetic(const st_synthetic_spec* spec, st_features** out);

/* Scene selection. ST_SELECT_UNIFORM groups k*(r+1) uniformly sampled frames. */
SCENETOK_API st_status st_select_scenes(const st_features* features, st_selection method, size_t k, size_t r,
                                        uint64_t seed, st_scene_set** out);
SCENETOK_API size_t st_scene_set_count(const st_scene_set* scenes);
SCENETOK_API st_status st_scene_set_scene(const st_scene_set* scenes, size_t index, size_t* representative,
                                          const size_t** members, size_t* n_members);
SCENETOK_API size_t st_scene_set_warning_count(const st_scene_set* scenes);
SCENETOK_API st_status st_scene_set_to_json(const st_scene_set* scenes, char** out_json);
SCENETOK_API void st_scene_set_free(st_scene_set* scenes);

/* Merges one scene (s, L, D) into a single frame, returned as (1, L, D).
 * fusion_weights may be NULL (uniform averaging weights). */
SCENETOK_API st_status st_merge_scene(const st_features* scene, st_merge strategy, const st_features* fusion_weights,
                                      uint64_t seed, st_features** out);

SCENETOK_API void st_compress_config_default(st_compress_config* config);
SCENETOK_API st_status st_compress_config_from_json(const char* json, st_compress_config* config);
/* Output has exactly scenes_k frames. fusion_weights may be NULL. */
SCENETOK_API st_status st_compress(const st_features* features, const st_compress_config* config,
                                   const st_features* fusion_weights, st_features** out);

/* configs_json: JSON array of compress configs. Either output may be NULL.
 * record_timing = 0 reports wall_ms as 0 for reproducible reports. */
SCENETOK_API st_status st_bench(const st_features* features, const char* configs_json, int record_timing,
                                char** out_report_json, char** out_table);

/* manifest_json: JSON array of {"id", "duration", "caption"}. Either output may be NULL. */
SCENETOK_API st_status st_synth(const char* manifest_json, double min_s, double max_s, size_t instruction_frames,
                                uint64_t seed, char** out_records_json, char** out_warnings_json);
SCENETOK_API st_status st_dataset_stats(const char* records_json, char** out_stats_json, char** out_table);

#ifdef __cplusplus
}
#endif

#endif /* SCENETOK_SCENETOK_H */
