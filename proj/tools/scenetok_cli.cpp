// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the library only through the C API.
//
// Exit codes: 0 success, 1 runtime or validation error, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "scenetok/scenetok.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RuntimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FeaturesDeleter {
    void operator()(st_features* f) const { st_features_free(f); }
};
struct SceneSetDeleter {
    void operator()(st_scene_set* s) const { st_scene_set_free(s); }
};
struct StringDeleter {
    void operator()(char* s) const { st_string_free(s); }
};
using FeaturesPtr = std::unique_ptr<st_features, FeaturesDeleter>;
using SceneSetPtr = std::unique_ptr<st_scene_set, SceneSetDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

void check(st_status status, const std::string& context) {
    if (status != ST_OK) {
        throw RuntimeError(context + ": " + st_status_string(status) + ": " + st_last_error());
    }
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw RuntimeError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw RuntimeError("cannot open " + tmp + " for writing");
        }
        out << text;
        if (!out.flush()) {
            throw RuntimeError("failed writing " + tmp);
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw RuntimeError("cannot rename into " + path);
    }
}

FeaturesPtr load(const std::string& path) {
    st_features* raw = nullptr;
    check(st_features_load(path.c_str(), &raw), "loading " + path);
    return FeaturesPtr(raw);
}

std::string shape_string(const st_features* f) {
    size_t n = 0, l = 0, d = 0;
    check(st_features_shape(f, &n, &l, &d), "shape");
    return std::to_string(n) + "x" + std::to_string(l) + "x" + std::to_string(d);
}

struct GlobalOptions {
    std::uint64_t seed = 0;
    std::string output;
    std::string format = "json";
};

// --- gen -------------------------------------------------------------------

struct GenOptions {
    std::size_t frames = 0;
    std::size_t patches = 0;
    std::size_t dim = 0;
    std::size_t scenes = 1;
    double noise = 0.1;
    double fps = 0.0;
    std::vector<std::size_t> block_lengths;
};

int run_gen(const GlobalOptions& g, const GenOptions& o) {
    if (g.output.empty()) {
        throw UsageError("gen: --output is required");
    }
    st_synthetic_spec spec{};
    spec.n_frames = o.frames;
    spec.n_patches = o.patches;
    spec.dim = o.dim;
    spec.n_scenes = o.scenes;
    spec.noise_sigma = o.noise;
    spec.seed = g.seed;
    spec.block_lengths = o.block_lengths.empty() ? nullptr : o.block_lengths.data();
    spec.n_block_lengths = o.block_lengths.size();

    st_features* raw = nullptr;
    check(st_generate_synthetic(&spec, &raw), "gen");
    FeaturesPtr features(raw);
    if (o.fps > 0.0) {
        std::vector<double> ts(o.frames);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            ts[i] = static_cast<double>(i) / o.fps;
        }
        check(st_features_set_timestamps(features.get(), ts.data(), ts.size()), "gen");
    }
    check(st_features_save(features.get(), g.output.c_str()), "writing " + g.output);

    if (g.format == "json") {
        std::cout << nlohmann::json{{"path", g.output}, {"shape", {o.frames, o.patches, o.dim}}}.dump() << "\n";
    } else {
        std::cout << g.output << " " << shape_string(features.get()) << "\n";
    }
    return 0;
}

// --- select ----------------------------------------------------------------

struct SelectOptions {
    std::string input;
    std::string method = "kmeans";
    std::size_t k = 0;
    std::size_t r = 2;
};

int run_select(const GlobalOptions& g, const SelectOptions& o) {
    st_selection method{};
    if (st_parse_selection(o.method.c_str(), &method) != ST_OK) {
        throw UsageError(st_last_error());
    }
    FeaturesPtr features = load(o.input);
    st_scene_set* raw = nullptr;
    check(st_select_scenes(features.get(), method, o.k, o.r, g.seed, &raw), "select");
    SceneSetPtr scenes(raw);

    char* json_raw = nullptr;
    check(st_scene_set_to_json(scenes.get(), &json_raw), "select");
    StringPtr json(json_raw);
    if (!g.output.empty()) {
        write_text_atomic(g.output, json.get());
    }
    if (g.format == "table") {
        std::printf("%-6s %-14s %s\n", "scene", "representative", "members");
        for (size_t i = 0; i < st_scene_set_count(scenes.get()); ++i) {
            size_t rep = 0, count = 0;
            const size_t* members = nullptr;
            check(st_scene_set_scene(scenes.get(), i, &rep, &members, &count), "select");
            std::string list;
            for (size_t m = 0; m < count; ++m) {
                list += (m ? " " : "") + std::to_string(members[m]);
            }
            std::printf("%-6zu %-14zu %s\n", i, rep, list.c_str());
        }
    } else if (g.output.empty()) {
        std::cout << json.get();
    }
    return 0;
}

// --- compress --------------------------------------------------------------

struct CompressOptions {
    std::string input;
    std::size_t k = 0;
    std::size_t r = 2;
    std::size_t input_frames = 0;  // 0 = every frame
    std::string select = "kmeans";
    std::string merge = "fusion";
    std::string weights;
};

int run_compress(const GlobalOptions& g, const CompressOptions& o) {
    if (g.output.empty()) {
        throw UsageError("compress: --output is required");
    }
    st_compress_config config{};
    st_compress_config_default(&config);
    if (st_parse_selection(o.select.c_str(), &config.selection) != ST_OK ||
        st_parse_merge(o.merge.c_str(), &config.merging) != ST_OK) {
        throw UsageError(st_last_error());
    }
    FeaturesPtr features = load(o.input);
    size_t n = 0;
    check(st_features_shape(features.get(), &n, nullptr, nullptr), "compress");
    config.input_frames = o.input_frames == 0 ? n : o.input_frames;
    config.scenes_k = o.k;
    config.supplements_r = o.r;
    config.seed = g.seed;

    FeaturesPtr weights;
    if (!o.weights.empty()) {
        weights = load(o.weights);
    }
    st_features* raw = nullptr;
    check(st_compress(features.get(), &config, weights.get(), &raw), "compress");
    FeaturesPtr out(raw);
    check(st_features_save(out.get(), g.output.c_str()), "writing " + g.output);

    if (g.format == "json") {
        size_t on = 0, ol = 0, od = 0;
        check(st_features_shape(out.get(), &on, &ol, &od), "compress");
        std::cout << nlohmann::json{{"path", g.output}, {"shape", {on, ol, od}}}.dump() << "\n";
    } else {
        std::cout << g.output << " " << shape_string(out.get()) << "\n";
    }
    return 0;
}

// --- bench -----------------------------------------------------------------

struct BenchOptions {
    std::string input;
    std::string configs;
    bool no_timing = false;
};

int run_bench(const GlobalOptions& g, const BenchOptions& o) {
    const std::string text = read_text(o.configs);
    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw RuntimeError(o.configs + ": invalid JSON at byte " + std::to_string(e.byte));
    }
    if (!parsed.is_array() || parsed.empty()) {
        throw UsageError("bench: " + o.configs + " must hold a non-empty JSON array of configs");
    }

    FeaturesPtr features = load(o.input);
    char* report_raw = nullptr;
    char* table_raw = nullptr;
    check(st_bench(features.get(), text.c_str(), o.no_timing ? 0 : 1, &report_raw, &table_raw), "bench");
    StringPtr report(report_raw);
    StringPtr table(table_raw);
    if (!g.output.empty()) {
        write_text_atomic(g.output, report.get());
    }
    if (g.format == "table") {
        std::cout << table.get();
    } else if (g.output.empty()) {
        std::cout << report.get();
    }
    return 0;
}

// --- synth -----------------------------------------------------------------

struct SynthOptions {
    std::string manifest;
    double min_s = 300.0;
    double max_s = 1800.0;
    std::size_t frames = 32;
    bool stats = false;
};

int run_synth(const GlobalOptions& g, const SynthOptions& o) {
    const std::string manifest = read_text(o.manifest);
    char* records_raw = nullptr;
    char* warnings_raw = nullptr;
    check(st_synth(manifest.c_str(), o.min_s, o.max_s, o.frames, g.seed, &records_raw, &warnings_raw),
          "synth " + o.manifest);
    StringPtr records(records_raw);
    StringPtr warnings(warnings_raw);
    for (const auto& w : nlohmann::json::parse(warnings.get())) {
        std::cerr << "warning: " << w.get<std::string>() << "\n";
    }
    if (!g.output.empty()) {
        write_text_atomic(g.output, records.get());
    }
    if (o.stats) {
        char* stats_raw = nullptr;
        char* table_raw = nullptr;
        check(st_dataset_stats(records.get(), &stats_raw, &table_raw), "synth --stats");
        StringPtr stats(stats_raw);
        StringPtr table(table_raw);
        std::cout << (g.format == "table" ? table.get() : stats.get());
    } else if (g.output.empty()) {
        std::cout << records.get();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scenetok: scene selection and merging for video frame features"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("-o,--output", g.output, "Output path");
    app.add_option("--format", g.format, "Console output format")
        ->check(CLI::IsMember({"json", "table"}))
        ->capture_default_str();

    GenOptions gen_opts;
    auto* gen = app.add_subcommand("gen", "Generate synthetic frame features with planted scenes (FVT1)");
    gen->add_option("--frames", gen_opts.frames, "Number of frames")->required();
    gen->add_option("--patches", gen_opts.patches, "Patch tokens per frame")->required();
    gen->add_option("--dim", gen_opts.dim, "Feature dimension")->required();
    gen->add_option("--scenes", gen_opts.scenes, "Planted scene blocks")->capture_default_str();
    gen->add_option("--noise", gen_opts.noise, "Gaussian noise sigma")->capture_default_str();
    gen->add_option("--fps", gen_opts.fps, "Attach frame timestamps at this rate (0 = none)")->capture_default_str();
    gen->add_option("--block-lengths", gen_opts.block_lengths, "Explicit scene block lengths")->delimiter(',');

    SelectOptions select_opts;
    auto* select = app.add_subcommand("select", "Select scenes and write a SceneSet JSON");
    select->add_option("input", select_opts.input, "FVT1 feature file")->required();
    select->add_option("--method", select_opts.method, "kmeans | bsm | uniform")
        ->check(CLI::IsMember({"kmeans", "bsm", "uniform"}))
        ->capture_default_str();
    select->add_option("--k", select_opts.k, "Number of scenes")->required();
    select->add_option("--r", select_opts.r, "Supplement frames per scene")->capture_default_str();

    CompressOptions compress_opts;
    auto* compress = app.add_subcommand("compress", "Select and merge scenes into a shorter FVT1 sequence");
    compress->add_option("input", compress_opts.input, "FVT1 feature file")->required();
    compress->add_option("--k", compress_opts.k, "Number of output frames (scenes)")->required();
    compress->add_option("--r", compress_opts.r, "Supplement frames per scene")->capture_default_str();
    compress->add_option("--input-frames", compress_opts.input_frames,
                         "Uniformly sample this many frames first (0 = all)")
        ->capture_default_str();
    compress->add_option("--select", compress_opts.select, "uniform | kmeans | bsm")
        ->check(CLI::IsMember({"uniform", "kmeans", "bsm"}))
        ->capture_default_str();
    compress->add_option("--merge", compress_opts.merge, "tavg | fusion | attnpool | bsm")
        ->check(CLI::IsMember({"tavg", "fusion", "attnpool", "bsm"}))
        ->capture_default_str();
    compress->add_option("--weights", compress_opts.weights, "FVT1 fusion weights (s, L, D)");

    BenchOptions bench_opts;
    auto* bench = app.add_subcommand("bench", "Compare compression configs on one feature file");
    bench->add_option("input", bench_opts.input, "FVT1 feature file")->required();
    bench->add_option("--configs", bench_opts.configs, "JSON file with an array of compress configs")->required();
    bench->add_flag("--no-timing", bench_opts.no_timing, "Report wall_ms as 0 for reproducible output");

    SynthOptions synth_opts;
    auto* synth = app.add_subcommand("synth", "Pack short captioned clips into long-video records");
    synth->add_option("manifest", synth_opts.manifest, "JSON array of {id, duration, caption}")->required();
    synth->add_option("--min", synth_opts.min_s, "Minimum record duration (s)")->capture_default_str();
    synth->add_option("--max", synth_opts.max_s, "Maximum record duration (s)")->capture_default_str();
    synth->add_option("--frames", synth_opts.frames, "Frames named in the instruction string")->capture_default_str();
    synth->add_flag("--stats", synth_opts.stats, "Print duration and caption-length histograms");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*gen) {
            return run_gen(g, gen_opts);
        }
        if (*select) {
            return run_select(g, select_opts);
        }
        if (*compress) {
            return run_compress(g, compress_opts);
        }
        if (*bench) {
            return run_bench(g, bench_opts);
        }
        if (*synth) {
            return run_synth(g, synth_opts);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
