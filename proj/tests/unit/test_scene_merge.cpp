// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "scenetok/scene_merge.hpp"

using namespace scenetok;

namespace {

SceneTensor repeat_frame(const Tensor3f& frame, std::size_t s) {
    const auto [one, l, d] = frame.shape();
    SceneTensor out({s, l, d});
    for (std::size_t i = 0; i < s; ++i) {
        std::copy(frame.slice(0).begin(), frame.slice(0).end(), out.slice(i).begin());
    }
    return out;
}

void expect_equals_frame(const Matrix& got, const Tensor3f& scene, std::size_t frame, double tol = 0.0) {
    const auto [s, l, d] = scene.shape();
    ASSERT_EQ(got.rows(), l);
    ASSERT_EQ(got.cols(), d);
    for (std::size_t j = 0; j < l; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
            if (tol == 0.0) {
                EXPECT_EQ(got(j, k), static_cast<double>(scene(frame, j, k)));
            } else {
                EXPECT_NEAR(got(j, k), scene(frame, j, k), tol);
            }
        }
    }
}

Tensor3d random_weights(Shape3 shape, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Tensor3d w(shape);
    for (double& v : w.values()) {
        v = u(rng);
    }
    return w;
}

}  // namespace

TEST(MergeStrategy, NamesRoundTrip) {
    for (auto s : {MergeStrategy::TemporalAverage, MergeStrategy::WeightedFusion, MergeStrategy::AttentionPool,
                   MergeStrategy::Bsm}) {
        EXPECT_EQ(parse_merge_strategy(to_string(s)), s);
    }
    EXPECT_EQ(to_string(MergeStrategy::TemporalAverage), "tavg");
    try {
        parse_merge_strategy("max");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parameter);
        EXPECT_NE(std::string(e.what()).find("attnpool"), std::string::npos);
    }
}

TEST(TemporalAverage, IdenticalFrames) {
    const auto frame = oracle::random_tensor({1, 4, 6}, 3);
    const auto scene = repeat_frame(frame, 3);
    expect_equals_frame(temporal_average(scene), scene, 0);
}

TEST(TemporalAverage, Midpoint) {
    SceneTensor scene({2, 3, 4}, 0.0f);
    for (float& v : scene.slice(1)) {
        v = 2.0f;
    }
    const auto out = temporal_average(scene);
    for (double v : out.values()) {
        EXPECT_EQ(v, 1.0);
    }
}

TEST(TemporalAverage, MatchesHighPrecisionOracle) {
    const auto scene = oracle::random_tensor({4, 8, 16}, 19);
    const auto got = temporal_average(scene);
    const auto want = oracle::outer_mean(scene);
    for (std::size_t x = 0; x < want.size(); ++x) {
        EXPECT_NEAR(got.values()[x], static_cast<double>(want[x]), 1e-5);
    }
}

TEST(FusionInit, EntriesAreReciprocal) {
    const auto four = fusion_init(4, 3, 2);
    for (double v : four.w.values()) {
        EXPECT_EQ(v, 0.25);
    }
    const auto one = fusion_init(1, 3, 2);
    for (double v : one.w.values()) {
        EXPECT_EQ(v, 1.0);
    }
    EXPECT_EQ(fusion_init(3, 5, 7).shape(), (Shape3{3, 5, 7}));
    EXPECT_THROW(fusion_init(0, 1, 1), Error);
}

TEST(Fusion, OneHotSelectsFrame) {
    const auto scene = oracle::random_tensor({3, 4, 5}, 8);
    for (std::size_t sel = 0; sel < 3; ++sel) {
        FusionWeights w{Tensor3d(scene.shape(), 0.0)};
        for (std::size_t j = 0; j < 4; ++j) {
            for (std::size_t k = 0; k < 5; ++k) {
                w.w(sel, j, k) = 1.0;
            }
        }
        expect_equals_frame(fusion(scene, w), scene, sel);
    }
}

TEST(Fusion, InitMatchesTemporalAverage) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t s = 1 + rng() % 5;
        const auto scene = oracle::random_tensor({s, 1 + rng() % 8, 1 + rng() % 8}, rng(), -10.0f, 10.0f);
        const auto a = fusion(scene, fusion_init(s, scene.shape().d1, scene.shape().d2));
        const auto b = temporal_average(scene);
        for (std::size_t x = 0; x < a.values().size(); ++x) {
            EXPECT_NEAR(a.values()[x], b.values()[x], 1e-6);
        }
    }
}

TEST(Fusion, MatchesTripleLoop) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const auto scene = oracle::random_tensor({1 + rng() % 4, 8, 16}, rng());
        const FusionWeights w{random_weights(scene.shape(), rng())};
        const auto got = fusion(scene, w);
        const auto want = oracle::fusion_loop(scene, w.w);
        for (std::size_t x = 0; x < want.size(); ++x) {
            EXPECT_NEAR(got.values()[x], want[x], 1e-5);
        }
    }
}

TEST(Fusion, ShapeMismatchIsParameterError) {
    const auto scene = oracle::random_tensor({3, 2, 2}, 1);
    try {
        fusion(scene, fusion_init(2, 2, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parameter);
    }
    EXPECT_THROW(fusion_gradient(scene, fusion_init(3, 2, 2), Matrix(2, 3)), Error);
}

TEST(Fusion, LinearInSceneData) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Shape3 shape{1 + rng() % 4, 1 + rng() % 6, 1 + rng() % 6};
        const auto f = oracle::random_tensor(shape, rng());
        const auto g = oracle::random_tensor(shape, rng());
        const FusionWeights w{random_weights(shape, rng())};
        const float alpha = 0.75f;
        const float beta = -1.5f;
        SceneTensor mix(shape);
        for (std::size_t x = 0; x < mix.size(); ++x) {
            mix.values()[x] = alpha * f.values()[x] + beta * g.values()[x];
        }
        const auto lhs = fusion(mix, w);
        const auto rf = fusion(f, w);
        const auto rg = fusion(g, w);
        for (std::size_t x = 0; x < lhs.values().size(); ++x) {
            EXPECT_NEAR(lhs.values()[x], alpha * rf.values()[x] + beta * rg.values()[x], 1e-5);
        }
    }
}

TEST(FusionGradient, Ones) {
    const SceneTensor scene({3, 2, 4}, 1.0f);
    const auto g = fusion_gradient(scene, fusion_init(3, 2, 4), Matrix(2, 4, 1.0));
    for (double v : g.values()) {
        EXPECT_EQ(v, 1.0);
    }
    const auto z = fusion_gradient(oracle::random_tensor({3, 2, 4}, 5), fusion_init(3, 2, 4), Matrix(2, 4, 0.0));
    for (double v : z.values()) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(FusionGradient, MatchesFiniteDifferences) {
    std::mt19937_64 rng(4);
    const double h = 1e-3;
    for (int trial = 0; trial < 10; ++trial) {
        const Shape3 shape{2 + rng() % 3, 3, 4};
        const auto scene = oracle::random_tensor(shape, rng());
        const FusionWeights w{random_weights(shape, rng())};
        const auto target_m = oracle::random_matrix(shape.d1, shape.d2, rng());
        const std::vector<double> target(target_m.values().begin(), target_m.values().end());

        const auto out = fusion(scene, w);
        Matrix upstream(shape.d1, shape.d2);
        for (std::size_t x = 0; x < target.size(); ++x) {
            upstream.values()[x] = out.values()[x] - target[x];
        }
        const auto grad = fusion_gradient(scene, w, upstream);
        for (std::size_t x = 0; x < w.w.size(); ++x) {
            Tensor3d plus = w.w;
            Tensor3d minus = w.w;
            plus.values()[x] += h;
            minus.values()[x] -= h;
            const double fd =
                (oracle::half_sq_loss(scene, plus, target) - oracle::half_sq_loss(scene, minus, target)) / (2 * h);
            EXPECT_LE(oracle::relative_error(grad.values()[x], fd), 1e-4) << x;
        }
    }
}

TEST(FitFusion, AlreadyOptimalAtInit) {
    std::vector<SceneTensor> scenes;
    std::vector<Matrix> targets;
    for (std::uint64_t i = 0; i < 4; ++i) {
        scenes.push_back(oracle::random_tensor({3, 2, 4}, i));
        targets.push_back(temporal_average(scenes.back()));
    }
    const auto fit = fit_fusion_weights(scenes, targets, 0.01, 20);
    EXPECT_LT(fit.losses.front(), 1e-20);
    for (std::size_t x = 0; x < fit.weights.w.size(); ++x) {
        EXPECT_NEAR(fit.weights.w.values()[x], 1.0 / 3.0, 1e-12);
    }
}

TEST(FitFusion, LearnsToSelectFirstFrame) {
    std::vector<SceneTensor> scenes;
    std::vector<Matrix> targets;
    for (std::uint64_t i = 0; i < 8; ++i) {
        scenes.push_back(oracle::random_tensor({3, 4, 6}, 100 + i));
        Matrix t(4, 6);
        for (std::size_t j = 0; j < 4; ++j) {
            for (std::size_t k = 0; k < 6; ++k) {
                t(j, k) = scenes.back()(0, j, k);
            }
        }
        targets.push_back(t);
    }
    const auto fit = fit_fusion_weights(scenes, targets, 0.01, 500);
    ASSERT_EQ(fit.losses.size(), 501u);
    EXPECT_LE(fit.losses.back(), 0.1 * fit.losses.front());
    for (std::size_t i = 1; i < fit.losses.size(); ++i) {
        EXPECT_LE(fit.losses[i], fit.losses[i - 1] + 1e-15);
    }
    EXPECT_NEAR(fusion_loss(scenes, targets, fit.weights), fit.losses[fit.best_step], 1e-12);
}

TEST(FitFusion, SingleCoordinateLeastSquares) {
    // One scene, s=2, L=D=1: minimize 0.5 (a w0 + b w1 - t)^2 from (0.5, 0.5).
    // Gradient descent stays on the line through the init along (a, b), so the
    // limit is the min-norm correction: w = w_init + (t - a/2 - b/2) (a, b) / (a^2 + b^2).
    const float a = 0.8f;
    const float b = -0.3f;
    const double t = 1.7;
    SceneTensor scene({2, 1, 1}, std::vector<float>{a, b});
    const auto fit = fit_fusion_weights({scene}, {Matrix(1, 1, t)}, 0.5, 2000);
    const double resid = t - 0.5 * a - 0.5 * b;
    const double norm2 = static_cast<double>(a) * a + static_cast<double>(b) * b;
    EXPECT_NEAR(fit.weights.w(0, 0, 0), 0.5 + resid * a / norm2, 1e-3);
    EXPECT_NEAR(fit.weights.w(1, 0, 0), 0.5 + resid * b / norm2, 1e-3);
}

TEST(FitFusion, OversizedStepReturnsBestIterate) {
    SceneTensor scene({2, 1, 1}, std::vector<float>{3.0f, 4.0f});
    const auto fit = fit_fusion_weights({scene}, {Matrix(1, 1, 0.0)}, 10.0, 10);
    EXPECT_EQ(fit.best_step, 0u);
    EXPECT_NEAR(fusion_loss({scene}, {Matrix(1, 1, 0.0)}, fit.weights), fit.losses.front(), 1e-12);
}

TEST(FitFusion, EmptyInputIsParameterError) {
    try {
        fit_fusion_weights({}, {}, 0.1, 10);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parameter);
    }
}

TEST(Xavier, BoundsAndDeterminism) {
    const auto p = xavier_projections(32, 7);
    const double bound = std::sqrt(6.0 / 64.0);
    for (double v : p.wq.values()) {
        EXPECT_LE(std::abs(v), bound);
    }
    for (double v : p.wk.values()) {
        EXPECT_LE(std::abs(v), bound);
    }
    EXPECT_EQ(p.wq, xavier_projections(32, 7).wq);
    EXPECT_NE(p.wq, xavier_projections(32, 8).wq);
    EXPECT_NE(p.wq, p.wk);
}

TEST(AttentionPool, MiddleFrame) {
    EXPECT_EQ(middle_frame(1), 0u);
    EXPECT_EQ(middle_frame(2), 1u);
    EXPECT_EQ(middle_frame(3), 1u);
    EXPECT_EQ(middle_frame(4), 2u);
}

TEST(AttentionPool, IdenticalFramesExact) {
    const auto frame = oracle::random_tensor({1, 5, 8}, 6);
    for (std::size_t s : {1u, 2u, 3u, 4u}) {
        const auto scene = repeat_frame(frame, s);
        expect_equals_frame(attention_pool(scene, xavier_projections(8, s)), scene, 0);
    }
}

TEST(AttentionPool, MatchesLoopReference) {
    const auto scene = oracle::random_tensor({3, 4, 8}, 13);
    const auto proj = xavier_projections(8, 21);
    std::vector<double> weights;
    const auto want = oracle::attention_loop(scene, proj.wq, proj.wk, &weights);
    const auto got = attention_pool(scene, proj);
    for (std::size_t x = 0; x < want.size(); ++x) {
        EXPECT_NEAR(got.values()[x], want[x], 1e-5);
    }
    const auto a = attention_weights(scene, proj);
    for (std::size_t x = 0; x < weights.size(); ++x) {
        EXPECT_NEAR(a.values()[x], weights[x], 1e-9);
    }
}

TEST(AttentionPool, ConvexWeightsAndHull) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t s = 1 + rng() % 5;
        const std::size_t d = 1 + rng() % 8;
        const auto scene = oracle::random_tensor({s, 3, d}, rng(), -3.0f, 3.0f);
        const auto proj = xavier_projections(d, rng());
        const auto a = attention_weights(scene, proj);
        ASSERT_EQ(a.rows(), s);
        for (std::size_t j = 0; j < 3; ++j) {
            double total = 0.0;
            for (std::size_t m = 0; m < s; ++m) {
                EXPECT_GE(a(m, j), 0.0);
                total += a(m, j);
            }
            EXPECT_NEAR(total, 1.0, 1e-6);
        }
        const auto out = attention_pool(scene, proj);
        for (std::size_t j = 0; j < 3; ++j) {
            for (std::size_t k = 0; k < d; ++k) {
                float lo = scene(0, j, k);
                float hi = lo;
                for (std::size_t m = 1; m < s; ++m) {
                    lo = std::min(lo, scene(m, j, k));
                    hi = std::max(hi, scene(m, j, k));
                }
                EXPECT_GE(out(j, k), lo - 1e-9);
                EXPECT_LE(out(j, k), hi + 1e-9);
            }
        }
    }
}

TEST(MergeScene, EachStrategyFiniteShape) {
    const auto scene = oracle::random_tensor({3, 8, 16}, 15);
    for (auto st : {MergeStrategy::TemporalAverage, MergeStrategy::WeightedFusion, MergeStrategy::AttentionPool,
                    MergeStrategy::Bsm}) {
        const auto out = merge_scene(scene, st);
        EXPECT_EQ(out.rows(), 8u);
        EXPECT_EQ(out.cols(), 16u);
        for (double v : out.values()) {
            EXPECT_TRUE(std::isfinite(v));
        }
    }
}

TEST(MergeScene, IdenticalFramesPreserved) {
    const auto frame = oracle::random_tensor({1, 8, 16}, 16);
    for (std::size_t s : {1u, 2u, 3u, 5u}) {
        const auto scene = repeat_frame(frame, s);
        for (auto st : {MergeStrategy::TemporalAverage, MergeStrategy::AttentionPool, MergeStrategy::Bsm}) {
            expect_equals_frame(merge_scene(scene, st), scene, 0);
        }
        // 1/s weights are exact only up to rounding.
        expect_equals_frame(merge_scene(scene, MergeStrategy::WeightedFusion), scene, 0, 1e-6);
    }
}

TEST(MergeScene, DimensionPermutationEquivariant) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t d = 2 + rng() % 6;
        const auto scene = oracle::random_tensor({3, 4, d}, rng());
        std::vector<std::size_t> perm(d);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        SceneTensor permuted(scene.shape());
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                for (std::size_t k = 0; k < d; ++k) {
                    permuted(i, j, k) = scene(i, j, perm[k]);
                }
            }
        }
        // Projections must follow the permutation: W'[a][b] = W[perm a][perm b].
        const auto proj = xavier_projections(d, rng());
        AttnProjections pproj{Matrix(d, d), Matrix(d, d), proj.seed};
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) {
                pproj.wq(a, b) = proj.wq(perm[a], perm[b]);
                pproj.wk(a, b) = proj.wk(perm[a], perm[b]);
            }
        }
        for (auto st : {MergeStrategy::TemporalAverage, MergeStrategy::WeightedFusion, MergeStrategy::AttentionPool,
                        MergeStrategy::Bsm}) {
            MergeParams p;
            p.projections = proj;
            MergeParams pp;
            pp.projections = pproj;
            const auto a = merge_scene(scene, st, p);
            const auto b = merge_scene(permuted, st, pp);
            for (std::size_t j = 0; j < 4; ++j) {
                for (std::size_t k = 0; k < d; ++k) {
                    EXPECT_NEAR(b(j, k), a(j, perm[k]), 1e-9) << to_string(st);
                }
            }
        }
    }
}
