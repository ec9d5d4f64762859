// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenetok/feature_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <system_error>

#include <nlohmann/json.hpp>

namespace scenetok {

namespace {

static_assert(std::numeric_limits<float>::is_iec559 && sizeof(float) == 4);

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) {
        out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFFu));
    }
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) {
        v |= static_cast<std::uint32_t>(bytes[offset + b]) << (8 * b);
    }
    return v;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorKind::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    require(!in.bad(), ErrorKind::Io, "failed reading " + path.string());
    return bytes;
}

}  // namespace

std::vector<std::uint8_t> encode_fvt(const Tensor3f& tensor) {
    const Shape3& s = tensor.shape();
    constexpr auto u32_max = std::numeric_limits<std::uint32_t>::max();
    require(s.d0 <= u32_max && s.d1 <= u32_max && s.d2 <= u32_max, ErrorKind::Parameter,
            "FVT1 dims must fit in u32, got " + to_string(s));

    std::vector<std::uint8_t> out;
    out.reserve(kFvtHeaderBytes + 4 * tensor.size());
    out.insert(out.end(), std::begin(kFvtMagic), std::end(kFvtMagic));
    out.push_back(kFvtVersion);
    put_u32(out, 3);
    put_u32(out, static_cast<std::uint32_t>(s.d0));
    put_u32(out, static_cast<std::uint32_t>(s.d1));
    put_u32(out, static_cast<std::uint32_t>(s.d2));
    for (float v : tensor.values()) {
        put_u32(out, std::bit_cast<std::uint32_t>(v));
    }
    return out;
}

Tensor3f decode_fvt(std::span<const std::uint8_t> bytes) {
    require(bytes.size() >= 4, ErrorKind::Format, "FVT1: file too short for magic");
    require(std::memcmp(bytes.data(), kFvtMagic, 4) == 0, ErrorKind::Format, "FVT1: bad magic");
    require(bytes.size() >= 5, ErrorKind::Format, "FVT1: file too short for version");
    require(bytes[4] == kFvtVersion, ErrorKind::Format,
            "FVT1: unsupported version " + std::to_string(static_cast<int>(bytes[4])));
    require(bytes.size() >= 9, ErrorKind::Format, "FVT1: file too short for rank");
    const std::uint32_t rank = get_u32(bytes, 5);
    require(rank == 3, ErrorKind::Format, "FVT1: rank must be 3, got " + std::to_string(rank));
    require(bytes.size() >= kFvtHeaderBytes, ErrorKind::Format, "FVT1: file too short for dims");

    const std::uint64_t n = get_u32(bytes, 9);
    const std::uint64_t l = get_u32(bytes, 13);
    const std::uint64_t d = get_u32(bytes, 17);
    require(n >= 1 && l >= 1 && d >= 1, ErrorKind::Format,
            "FVT1: dims must be >= 1, got " + std::to_string(n) + "x" + std::to_string(l) + "x" + std::to_string(d));

    // n * l fits in u64; the product with d may not.
    constexpr std::uint64_t max_count = (std::numeric_limits<std::uint64_t>::max() - kFvtHeaderBytes) / 4;
    require(n * l <= max_count / d, ErrorKind::Format, "FVT1: dims overflow");
    const std::uint64_t count = n * l * d;
    const std::uint64_t expected = kFvtHeaderBytes + 4 * count;
    require(bytes.size() >= expected, ErrorKind::Length,
            "FVT1: truncated payload, expected " + std::to_string(expected) + " bytes, got " +
                std::to_string(bytes.size()));
    require(bytes.size() == expected, ErrorKind::Length,
            "FVT1: " + std::to_string(bytes.size() - expected) + " trailing bytes after payload");

    std::vector<float> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        values[i] = std::bit_cast<float>(get_u32(bytes, kFvtHeaderBytes + 4 * i));
    }
    return Tensor3f(Shape3{n, l, d}, std::move(values));
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
    return std::filesystem::path(path.string() + ".meta.json");
}

FrameFeatures load_features(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    FrameFeatures features{decode_fvt(bytes), std::nullopt};

    const auto meta = sidecar_path(path);
    if (std::filesystem::exists(meta)) {
        const auto raw = read_file(meta);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(raw.begin(), raw.end());
        } catch (const nlohmann::json::parse_error& e) {
            fail(ErrorKind::Parse, meta.string() + ": " + e.what());
        }
        if (j.contains("frame_timestamps")) {
            const auto& arr = j.at("frame_timestamps");
            require(arr.is_array(), ErrorKind::Format, meta.string() + ": frame_timestamps must be an array");
            std::vector<double> ts;
            for (const auto& v : arr) {
                require(v.is_number(), ErrorKind::Format, meta.string() + ": frame_timestamps must hold numbers");
                ts.push_back(v.get<double>());
            }
            features.frame_timestamps = std::move(ts);
        }
    }
    features.validate();
    return features;
}

void save_features(const FrameFeatures& features, const std::filesystem::path& path) {
    features.validate();
    write_file_atomic(path, encode_fvt(features.data));
    const auto meta = sidecar_path(path);
    if (features.frame_timestamps) {
        nlohmann::json j;
        j["frame_timestamps"] = *features.frame_timestamps;
        write_file_atomic(meta, j.dump(2) + "\n");
    } else {
        std::error_code ec;
        std::filesystem::remove(meta, ec);
    }
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        require(out.good(), ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        require(out.good(), ErrorKind::Io, "failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        fail(ErrorKind::Io, "cannot rename into " + path.string());
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
    write_file_atomic(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace scenetok
