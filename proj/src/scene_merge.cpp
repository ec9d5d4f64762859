// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenetok/scene_merge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace scenetok {

namespace {

void check_scene(const SceneTensor& scene) {
    const Shape3& s = scene.shape();
    require(s.d0 >= 1 && s.d1 >= 1 && s.d2 >= 1, ErrorKind::Validation,
            "scene tensor must have s, L, D >= 1, got " + to_string(s));
    for (float v : scene.values()) {
        require(std::isfinite(v), ErrorKind::Validation, "scene tensor contains a non-finite value");
    }
}

void check_weights(const SceneTensor& scene, const FusionWeights& weights) {
    require(weights.shape() == scene.shape(), ErrorKind::Parameter,
            "fusion weights shape " + to_string(weights.shape()) + " does not match scene shape " +
                to_string(scene.shape()));
}

}  // namespace

std::string_view to_string(MergeStrategy strategy) {
    switch (strategy) {
    case MergeStrategy::TemporalAverage:
        return "tavg";
    case MergeStrategy::WeightedFusion:
        return "fusion";
    case MergeStrategy::AttentionPool:
        return "attnpool";
    case MergeStrategy::Bsm:
        return "bsm";
    }
    return "?";
}

MergeStrategy parse_merge_strategy(std::string_view name) {
    if (name == "tavg") {
        return MergeStrategy::TemporalAverage;
    }
    if (name == "fusion") {
        return MergeStrategy::WeightedFusion;
    }
    if (name == "attnpool") {
        return MergeStrategy::AttentionPool;
    }
    if (name == "bsm") {
        return MergeStrategy::Bsm;
    }
    fail(ErrorKind::Parameter,
         "unknown merge strategy '" + std::string(name) + "' (valid: tavg, fusion, attnpool, bsm)");
}

Matrix temporal_average(const SceneTensor& scene) {
    check_scene(scene);
    const auto [s, l, d] = scene.shape();
    Matrix out(l, d);
    auto acc = out.values();
    for (std::size_t i = 0; i < s; ++i) {
        const auto frame = scene.slice(i);
        for (std::size_t x = 0; x < acc.size(); ++x) {
            acc[x] += frame[x];
        }
    }
    for (double& v : acc) {
        v /= static_cast<double>(s);
    }
    return out;
}

FusionWeights fusion_init(std::size_t s, std::size_t patches, std::size_t dim) {
    require(s >= 1 && patches >= 1 && dim >= 1, ErrorKind::Parameter, "fusion_init: dims must be >= 1");
    return FusionWeights{Tensor3d(Shape3{s, patches, dim}, 1.0 / static_cast<double>(s))};
}

Matrix fusion(const SceneTensor& scene, const FusionWeights& weights) {
    check_scene(scene);
    check_weights(scene, weights);
    const auto [s, l, d] = scene.shape();
    Matrix out(l, d);
    auto acc = out.values();
    for (std::size_t i = 0; i < s; ++i) {
        const auto frame = scene.slice(i);
        const auto w = weights.w.slice(i);
        for (std::size_t x = 0; x < acc.size(); ++x) {
            acc[x] += static_cast<double>(frame[x]) * w[x];
        }
    }
    return out;
}

Tensor3d fusion_gradient(const SceneTensor& scene, const FusionWeights& weights, const Matrix& upstream) {
    check_scene(scene);
    check_weights(scene, weights);
    const auto [s, l, d] = scene.shape();
    require(upstream.rows() == l && upstream.cols() == d, ErrorKind::Parameter,
            "fusion_gradient: upstream must be " + std::to_string(l) + "x" + std::to_string(d));
    Tensor3d grad(scene.shape());
    const auto up = upstream.values();
    for (std::size_t i = 0; i < s; ++i) {
        const auto frame = scene.slice(i);
        auto g = grad.slice(i);
        for (std::size_t x = 0; x < g.size(); ++x) {
            g[x] = up[x] * static_cast<double>(frame[x]);
        }
    }
    return grad;
}

namespace {

void check_fit_inputs(const std::vector<SceneTensor>& scenes, const std::vector<Matrix>& targets) {
    require(!scenes.empty(), ErrorKind::Parameter, "fit_fusion_weights: no scenes");
    require(scenes.size() == targets.size(), ErrorKind::Parameter,
            "fit_fusion_weights: " + std::to_string(scenes.size()) + " scenes but " + std::to_string(targets.size()) +
                " targets");
    const Shape3 shape = scenes.front().shape();
    for (std::size_t i = 0; i < scenes.size(); ++i) {
        require(scenes[i].shape() == shape, ErrorKind::Parameter,
                "fit_fusion_weights: scene " + std::to_string(i) + " has shape " + to_string(scenes[i].shape()) +
                    ", expected " + to_string(shape));
        require(targets[i].rows() == shape.d1 && targets[i].cols() == shape.d2, ErrorKind::Parameter,
                "fit_fusion_weights: target " + std::to_string(i) + " shape mismatch");
    }
}

// Loss and, when grad is non-null, its gradient w.r.t. the weights.
double loss_and_gradient(const std::vector<SceneTensor>& scenes, const std::vector<Matrix>& targets,
                         const FusionWeights& weights, Tensor3d* grad) {
    const double inv_n = 1.0 / static_cast<double>(scenes.size());
    if (grad) {
        *grad = Tensor3d(weights.shape(), 0.0);
    }
    double loss = 0.0;
    for (std::size_t k = 0; k < scenes.size(); ++k) {
        Matrix residual = fusion(scenes[k], weights);
        auto r = residual.values();
        const auto t = targets[k].values();
        for (std::size_t x = 0; x < r.size(); ++x) {
            r[x] -= t[x];
            loss += 0.5 * r[x] * r[x];
        }
        if (grad) {
            const Tensor3d g = fusion_gradient(scenes[k], weights, residual);
            auto dst = grad->values();
            const auto src = g.values();
            for (std::size_t x = 0; x < dst.size(); ++x) {
                dst[x] += inv_n * src[x];
            }
        }
    }
    return loss * inv_n;
}

}  // namespace

double fusion_loss(const std::vector<SceneTensor>& scenes, const std::vector<Matrix>& targets,
                   const FusionWeights& weights) {
    check_fit_inputs(scenes, targets);
    return loss_and_gradient(scenes, targets, weights, nullptr);
}

FitResult fit_fusion_weights(const std::vector<SceneTensor>& scenes, const std::vector<Matrix>& targets, double lr,
                             std::size_t steps) {
    check_fit_inputs(scenes, targets);
    require(std::isfinite(lr) && lr > 0.0, ErrorKind::Parameter, "fit_fusion_weights: lr must be positive");

    const Shape3 shape = scenes.front().shape();
    FusionWeights w = fusion_init(shape.d0, shape.d1, shape.d2);
    FitResult result{w, {}, 0};
    double best = std::numeric_limits<double>::infinity();
    Tensor3d grad;
    for (std::size_t step = 0; step <= steps; ++step) {
        const bool last = step == steps;
        const double loss = loss_and_gradient(scenes, targets, w, last ? nullptr : &grad);
        result.losses.push_back(loss);
        if (!std::isfinite(loss)) {
            break;
        }
        if (loss < best) {
            best = loss;
            result.weights = w;
            result.best_step = step;
        }
        if (last) {
            break;
        }
        auto dst = w.w.values();
        const auto g = grad.values();
        for (std::size_t x = 0; x < dst.size(); ++x) {
            dst[x] -= lr * g[x];
        }
    }
    return result;
}

AttnProjections xavier_projections(std::size_t dim, std::uint64_t seed) {
    require(dim >= 1, ErrorKind::Parameter, "xavier_projections: dim must be >= 1");
    const double bound = std::sqrt(6.0 / static_cast<double>(dim + dim));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-bound, bound);
    AttnProjections proj{Matrix(dim, dim), Matrix(dim, dim), seed};
    for (double& v : proj.wq.values()) {
        v = u(rng);
    }
    for (double& v : proj.wk.values()) {
        v = u(rng);
    }
    return proj;
}

namespace {

// (L, D) frame times (D, D) projection.
Matrix project(std::span<const float> frame, std::size_t l, std::size_t d, const Matrix& w) {
    Matrix out(l, d);
    for (std::size_t j = 0; j < l; ++j) {
        auto row = out.row(j);
        for (std::size_t a = 0; a < d; ++a) {
            const double x = frame[j * d + a];
            if (x == 0.0) {
                continue;
            }
            const auto wr = w.row(a);
            for (std::size_t b = 0; b < d; ++b) {
                row[b] += x * wr[b];
            }
        }
    }
    return out;
}

}  // namespace

Matrix attention_weights(const SceneTensor& scene, const AttnProjections& proj) {
    check_scene(scene);
    const auto [s, l, d] = scene.shape();
    require(proj.wq.rows() == d && proj.wq.cols() == d && proj.wk.rows() == d && proj.wk.cols() == d,
            ErrorKind::Parameter, "attention projections must be " + std::to_string(d) + "x" + std::to_string(d));

    const Matrix q = project(scene.slice(middle_frame(s)), l, d, proj.wq);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    Matrix scores(s, l);
    for (std::size_t m = 0; m < s; ++m) {
        const Matrix k = project(scene.slice(m), l, d, proj.wk);
        for (std::size_t j = 0; j < l; ++j) {
            scores(m, j) = dot(q.row(j), k.row(j)) * scale;
        }
    }
    // Softmax over the frame axis, per patch.
    for (std::size_t j = 0; j < l; ++j) {
        double peak = -std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < s; ++m) {
            peak = std::max(peak, scores(m, j));
        }
        double total = 0.0;
        for (std::size_t m = 0; m < s; ++m) {
            scores(m, j) = std::exp(scores(m, j) - peak);
            total += scores(m, j);
        }
        for (std::size_t m = 0; m < s; ++m) {
            scores(m, j) /= total;
        }
    }
    return scores;
}

Matrix attention_pool(const SceneTensor& scene, const AttnProjections& proj) {
    const Matrix a = attention_weights(scene, proj);
    const auto [s, l, d] = scene.shape();
    // Weights sum to one, so offsets from the query frame give the same
    // convex combination and reproduce identical frames exactly.
    const std::size_t mid = middle_frame(s);
    Matrix out(l, d);
    for (std::size_t j = 0; j < l; ++j) {
        auto row = out.row(j);
        for (std::size_t x = 0; x < d; ++x) {
            row[x] = scene(mid, j, x);
        }
    }
    for (std::size_t m = 0; m < s; ++m) {
        if (m == mid) {
            continue;
        }
        for (std::size_t j = 0; j < l; ++j) {
            const double w = a(m, j);
            auto row = out.row(j);
            for (std::size_t x = 0; x < d; ++x) {
                row[x] += w * (static_cast<double>(scene(m, j, x)) - scene(mid, j, x));
            }
        }
    }
    return out;
}

Matrix merge_scene(const SceneTensor& scene, MergeStrategy strategy, const MergeParams& params) {
    check_scene(scene);
    const auto [s, l, d] = scene.shape();
    switch (strategy) {
    case MergeStrategy::TemporalAverage:
        return temporal_average(scene);
    case MergeStrategy::WeightedFusion:
        if (params.fusion_weights) {
            return fusion(scene, *params.fusion_weights);
        }
        return fusion(scene, fusion_init(s, l, d));
    case MergeStrategy::AttentionPool:
        if (params.projections) {
            return attention_pool(scene, *params.projections);
        }
        return attention_pool(scene, xavier_projections(d, params.seed));
    case MergeStrategy::Bsm: {
        // Patch-major flattening: the s copies of patch j sit next to each
        // other, so the alternating split pairs them across A and B.
        Matrix tokens(s * l, d);
        for (std::size_t j = 0; j < l; ++j) {
            for (std::size_t i = 0; i < s; ++i) {
                auto row = tokens.row(j * s + i);
                for (std::size_t x = 0; x < d; ++x) {
                    row[x] = scene(i, j, x);
                }
            }
        }
        return bsm_merge(tokens, l).tokens;
    }
    }
    fail(ErrorKind::Parameter, "unknown merge strategy");
}

}  // namespace scenetok
