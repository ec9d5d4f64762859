// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenetok/tensor.hpp"

#include <cmath>

namespace scenetok {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Format:
        return "format error";
    case ErrorKind::Length:
        return "length error";
    case ErrorKind::Validation:
        return "validation error";
    case ErrorKind::Parameter:
        return "parameter error";
    case ErrorKind::Degenerate:
        return "degenerate input";
    case ErrorKind::Io:
        return "I/O error";
    case ErrorKind::Parse:
        return "parse error";
    }
    return "error";
}

std::string to_string(const Shape3& shape) {
    return std::to_string(shape.d0) + "x" + std::to_string(shape.d1) + "x" + std::to_string(shape.d2);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : m_rows(rows), m_cols(cols), m_data(std::move(data)) {
    require(m_data.size() == rows * cols, ErrorKind::Parameter,
            "Matrix: data length " + std::to_string(m_data.size()) + " does not match " + std::to_string(rows) + "x" +
                std::to_string(cols));
}

void FrameFeatures::validate() const {
    const Shape3& s = data.shape();
    require(s.d0 >= 1 && s.d1 >= 1 && s.d2 >= 1, ErrorKind::Validation,
            "frame features must have N, L, D >= 1, got " + to_string(s));
    require(data.size() == s.size(), ErrorKind::Validation, "frame features payload does not match shape");
    const auto values = data.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            const std::size_t per_frame = s.d1 * s.d2;
            fail(ErrorKind::Validation, "non-finite value at frame " + std::to_string(i / per_frame) + ", patch " +
                                            std::to_string((i % per_frame) / s.d2) + ", dim " +
                                            std::to_string(i % s.d2));
        }
    }
    if (frame_timestamps) {
        const auto& ts = *frame_timestamps;
        require(ts.size() == s.d0, ErrorKind::Validation,
                "expected " + std::to_string(s.d0) + " frame timestamps, got " + std::to_string(ts.size()));
        for (std::size_t i = 0; i < ts.size(); ++i) {
            require(std::isfinite(ts[i]) && ts[i] >= 0.0, ErrorKind::Validation,
                    "frame timestamp " + std::to_string(i) + " must be finite and non-negative");
            require(i == 0 || ts[i] > ts[i - 1], ErrorKind::Validation,
                    "frame timestamps must be strictly increasing (index " + std::to_string(i) + ")");
        }
    }
}

FrameFeatures gather_frames(const FrameFeatures& features, std::span<const std::size_t> indices) {
    const Shape3& s = features.data.shape();
    Tensor3f out(Shape3{indices.size(), s.d1, s.d2});
    std::optional<std::vector<double>> ts;
    if (features.frame_timestamps) {
        ts.emplace();
        ts->reserve(indices.size());
    }
    for (std::size_t i = 0; i < indices.size(); ++i) {
        require(indices[i] < s.d0, ErrorKind::Parameter,
                "frame index " + std::to_string(indices[i]) + " out of range for " + std::to_string(s.d0) + " frames");
        const auto src = features.data.slice(indices[i]);
        std::copy(src.begin(), src.end(), out.slice(i).begin());
        if (ts) {
            ts->push_back((*features.frame_timestamps)[indices[i]]);
        }
    }
    return FrameFeatures{std::move(out), std::move(ts)};
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace scenetok
