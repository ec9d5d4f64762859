// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scenetok/error.hpp"

namespace scenetok {

struct Shape3 {
    std::size_t d0 = 0;
    std::size_t d1 = 0;
    std::size_t d2 = 0;

    std::size_t size() const { return d0 * d1 * d2; }
    bool operator==(const Shape3&) const = default;
};

std::string to_string(const Shape3& shape);

/// Dense row-major rank-3 array. Index (i, j, k) lives at (i * d1 + j) * d2 + k.
template <typename T>
class Array3 {
public:
    Array3() = default;

    explicit Array3(Shape3 shape, T fill = T{}) : m_shape(shape), m_data(shape.size(), fill) {}

    Array3(Shape3 shape, std::vector<T> data) : m_shape(shape), m_data(std::move(data)) {
        require(m_data.size() == m_shape.size(), ErrorKind::Parameter,
                "Array3: data length " + std::to_string(m_data.size()) + " does not match shape " +
                    to_string(m_shape));
    }

    const Shape3& shape() const { return m_shape; }
    std::size_t size() const { return m_data.size(); }
    bool empty() const { return m_data.empty(); }

    T& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return m_data[(i * m_shape.d1 + j) * m_shape.d2 + k];
    }
    const T& operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return m_data[(i * m_shape.d1 + j) * m_shape.d2 + k];
    }

    /// Contiguous (d1 x d2) block of the i-th outer slice.
    std::span<T> slice(std::size_t i) { return {m_data.data() + i * m_shape.d1 * m_shape.d2, m_shape.d1 * m_shape.d2}; }
    std::span<const T> slice(std::size_t i) const {
        return {m_data.data() + i * m_shape.d1 * m_shape.d2, m_shape.d1 * m_shape.d2};
    }

    std::span<T> values() { return m_data; }
    std::span<const T> values() const { return m_data; }

    bool operator==(const Array3&) const = default;

private:
    Shape3 m_shape;
    std::vector<T> m_data;
};

using Tensor3f = Array3<float>;
using Tensor3d = Array3<double>;

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : m_rows(rows), m_cols(cols), m_data(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const { return m_rows; }
    std::size_t cols() const { return m_cols; }

    double& operator()(std::size_t r, std::size_t c) { return m_data[r * m_cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return m_data[r * m_cols + c]; }

    std::span<double> row(std::size_t r) { return {m_data.data() + r * m_cols, m_cols}; }
    std::span<const double> row(std::size_t r) const { return {m_data.data() + r * m_cols, m_cols}; }

    std::span<double> values() { return m_data; }
    std::span<const double> values() const { return m_data; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t m_rows = 0;
    std::size_t m_cols = 0;
    std::vector<double> m_data;
};

/// Per-frame patch-token embeddings, shape (frames, patches, dim).
struct FrameFeatures {
    Tensor3f data;
    std::optional<std::vector<double>> frame_timestamps;

    std::size_t frames() const { return data.shape().d0; }
    std::size_t patches() const { return data.shape().d1; }
    std::size_t dim() const { return data.shape().d2; }

    /// Throws Validation on empty dims, non-finite values or bad timestamps.
    void validate() const;

    bool operator==(const FrameFeatures&) const = default;
};

/// Frame-mean patch embedding, one row per frame.
using RepFeatures = Matrix;

/// Copy of the listed frames, in the given order.
FrameFeatures gather_frames(const FrameFeatures& features, std::span<const std::size_t> indices);

double squared_distance(std::span<const double> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

}  // namespace scenetok
