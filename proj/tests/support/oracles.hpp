// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Reference computations for tests. Written as plain loops over raw values,
// independent of the library's own kernels.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "scenetok/tensor.hpp"

namespace scenetok::oracle {

inline Tensor3f random_tensor(Shape3 shape, std::uint64_t seed, float lo = -1.0f, float hi = 1.0f) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> u(lo, hi);
    Tensor3f t(shape);
    for (float& v : t.values()) {
        v = u(rng);
    }
    return t;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double lo = -1.0,
                            double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    Matrix m(rows, cols);
    for (double& v : m.values()) {
        v = u(rng);
    }
    return m;
}

// Per-frame patch mean with long double accumulation.
inline std::vector<std::vector<long double>> frame_means(const Tensor3f& t) {
    const auto [n, l, d] = t.shape();
    std::vector<std::vector<long double>> out(n, std::vector<long double>(d, 0.0L));
    for (std::size_t f = 0; f < n; ++f) {
        for (std::size_t p = 0; p < l; ++p) {
            for (std::size_t k = 0; k < d; ++k) {
                out[f][k] += static_cast<long double>(t(f, p, k));
            }
        }
        for (auto& v : out[f]) {
            v /= static_cast<long double>(l);
        }
    }
    return out;
}

// Mean over the outer axis with long double accumulation: (L, D).
inline std::vector<long double> outer_mean(const Tensor3f& t) {
    const auto [s, l, d] = t.shape();
    std::vector<long double> out(l * d, 0.0L);
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < l; ++j) {
            for (std::size_t k = 0; k < d; ++k) {
                out[j * d + k] += static_cast<long double>(t(i, j, k));
            }
        }
    }
    for (auto& v : out) {
        v /= static_cast<long double>(s);
    }
    return out;
}

// sum_i F_i * W_i as a triple loop.
inline std::vector<double> fusion_loop(const Tensor3f& scene, const Tensor3d& w) {
    const auto [s, l, d] = scene.shape();
    std::vector<double> out(l * d, 0.0);
    for (std::size_t j = 0; j < l; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
            long double acc = 0.0L;
            for (std::size_t i = 0; i < s; ++i) {
                acc += static_cast<long double>(scene(i, j, k)) * static_cast<long double>(w(i, j, k));
            }
            out[j * d + k] = static_cast<double>(acc);
        }
    }
    return out;
}

// 0.5 * ||fusion_loop(scene, w) - target||^2
inline double half_sq_loss(const Tensor3f& scene, const Tensor3d& w, const std::vector<double>& target) {
    const auto out = fusion_loop(scene, w);
    long double acc = 0.0L;
    for (std::size_t x = 0; x < out.size(); ++x) {
        const long double r = out[x] - target[x];
        acc += r * r;
    }
    return static_cast<double>(0.5L * acc);
}

// Attention pooling with everything spelled out: query = middle frame, per
// patch softmax across frames.
inline std::vector<double> attention_loop(const Tensor3f& scene, const Matrix& wq, const Matrix& wk,
                                          std::vector<double>* weights_out = nullptr) {
    const auto [s, l, d] = scene.shape();
    const std::size_t mid = s / 2;
    std::vector<double> out(l * d, 0.0);
    if (weights_out) {
        weights_out->assign(s * l, 0.0);
    }
    for (std::size_t j = 0; j < l; ++j) {
        std::vector<long double> q(d, 0.0L);
        for (std::size_t b = 0; b < d; ++b) {
            for (std::size_t a = 0; a < d; ++a) {
                q[b] += static_cast<long double>(scene(mid, j, a)) * wq(a, b);
            }
        }
        std::vector<long double> score(s, 0.0L);
        for (std::size_t m = 0; m < s; ++m) {
            for (std::size_t b = 0; b < d; ++b) {
                long double kb = 0.0L;
                for (std::size_t a = 0; a < d; ++a) {
                    kb += static_cast<long double>(scene(m, j, a)) * wk(a, b);
                }
                score[m] += q[b] * kb;
            }
            score[m] /= std::sqrt(static_cast<long double>(d));
        }
        long double total = 0.0L;
        for (std::size_t m = 0; m < s; ++m) {
            score[m] = std::exp(score[m]);
            total += score[m];
        }
        for (std::size_t m = 0; m < s; ++m) {
            const long double a = score[m] / total;
            if (weights_out) {
                (*weights_out)[m * l + j] = static_cast<double>(a);
            }
            for (std::size_t k = 0; k < d; ++k) {
                out[j * d + k] += static_cast<double>(a * static_cast<long double>(scene(m, j, k)));
            }
        }
    }
    return out;
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    long double ab = 0.0L, aa = 0.0L, bb = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += static_cast<long double>(a[i]) * b[i];
        aa += static_cast<long double>(a[i]) * a[i];
        bb += static_cast<long double>(b[i]) * b[i];
    }
    return static_cast<double>(ab / std::sqrt(aa * bb));
}

inline std::vector<double> row_of(const Matrix& m, std::size_t r) {
    const auto row = m.row(r);
    return {row.begin(), row.end()};
}

// True when two labelings describe the same partition (equal up to renaming).
inline bool same_partition(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    std::map<std::size_t, std::size_t> ab, ba;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto [it1, new1] = ab.emplace(a[i], b[i]);
        auto [it2, new2] = ba.emplace(b[i], a[i]);
        if (it1->second != b[i] || it2->second != a[i]) {
            return false;
        }
    }
    return true;
}

inline double relative_error(double got, double want) {
    const double scale = std::max({std::abs(got), std::abs(want), 1e-12});
    return std::abs(got - want) / scale;
}

}  // namespace scenetok::oracle
