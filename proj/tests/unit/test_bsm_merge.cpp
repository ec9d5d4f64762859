// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "scenetok/scene_merge.hpp"

using namespace scenetok;

namespace {

std::vector<long double> weighted_column_sums(const Matrix& tokens, const std::vector<std::size_t>& sizes) {
    std::vector<long double> out(tokens.cols(), 0.0L);
    for (std::size_t i = 0; i < tokens.rows(); ++i) {
        for (std::size_t k = 0; k < tokens.cols(); ++k) {
            out[k] += static_cast<long double>(sizes[i]) * tokens(i, k);
        }
    }
    return out;
}

}  // namespace

TEST(BsmMerge, IdentityWhenTargetEqualsCount) {
    const auto tokens = oracle::random_matrix(9, 4, 1);
    const auto out = bsm_merge(tokens, 9);
    EXPECT_EQ(out.tokens, tokens);
    EXPECT_EQ(out.sizes, std::vector<std::size_t>(9, 1));
}

TEST(BsmMerge, PairsOfDuplicates) {
    const std::vector<double> u{1.0, 2.0, 0.5};
    const std::vector<double> v{-1.0, 0.3, 4.0};
    Matrix tokens(4, 3);
    for (std::size_t k = 0; k < 3; ++k) {
        tokens(0, k) = tokens(1, k) = u[k];
        tokens(2, k) = tokens(3, k) = v[k];
    }
    const auto out = bsm_merge(tokens, 2);
    ASSERT_EQ(out.tokens.rows(), 2u);
    EXPECT_EQ(out.sizes, (std::vector<std::size_t>{2, 2}));
    EXPECT_EQ(oracle::row_of(out.tokens, 0), u);
    EXPECT_EQ(oracle::row_of(out.tokens, 1), v);
}

TEST(BsmMerge, CountAndSizeSum) {
    const auto tokens = oracle::random_matrix(64, 32, 2);
    const auto out = bsm_merge(tokens, 16);
    EXPECT_EQ(out.tokens.rows(), 16u);
    EXPECT_EQ(out.sizes.size(), 16u);
    EXPECT_EQ(std::accumulate(out.sizes.begin(), out.sizes.end(), std::size_t{0}), 64u);
}

TEST(BsmMerge, TargetOutOfRange) {
    const auto tokens = oracle::random_matrix(5, 2, 3);
    for (std::size_t t : {0u, 6u}) {
        try {
            bsm_merge(tokens, t);
            FAIL() << t;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::Parameter);
        }
    }
}

TEST(BsmMerge, SingleTokenTarget) {
    const auto tokens = oracle::random_matrix(7, 3, 4);
    const auto out = bsm_merge(tokens, 1);
    EXPECT_EQ(out.sizes, std::vector<std::size_t>{7});
    for (std::size_t k = 0; k < 3; ++k) {
        long double mean = 0.0L;
        for (std::size_t i = 0; i < 7; ++i) {
            mean += tokens(i, k);
        }
        EXPECT_NEAR(out.tokens(0, k), static_cast<double>(mean / 7), 1e-12);
    }
}

TEST(BsmMergeProperty, ConservesWeightedMass) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t t0 = 1 + rng() % 80;
        const std::size_t target = 1 + rng() % t0;
        const std::size_t d = 1 + rng() % 10;
        const auto tokens = oracle::random_matrix(t0, d, rng(), -5.0, 5.0);
        const auto out = bsm_merge(tokens, target);
        ASSERT_EQ(out.tokens.rows(), target);
        ASSERT_EQ(out.sizes.size(), target);
        EXPECT_EQ(std::accumulate(out.sizes.begin(), out.sizes.end(), std::size_t{0}), t0);
        for (auto s : out.sizes) {
            EXPECT_GE(s, 1u);
        }
        const auto want = weighted_column_sums(tokens, std::vector<std::size_t>(t0, 1));
        const auto got = weighted_column_sums(out.tokens, out.sizes);
        for (std::size_t k = 0; k < d; ++k) {
            const double scale = std::max(1.0, static_cast<double>(std::abs(want[k])));
            EXPECT_LE(std::abs(static_cast<double>(got[k] - want[k])) / scale, 1e-4);
        }
    }
}

TEST(BsmMergeProperty, Deterministic) {
    const auto tokens = oracle::random_matrix(40, 6, 9);
    const auto a = bsm_merge(tokens, 11);
    const auto b = bsm_merge(tokens, 11);
    EXPECT_EQ(a.tokens, b.tokens);
    EXPECT_EQ(a.sizes, b.sizes);
}
