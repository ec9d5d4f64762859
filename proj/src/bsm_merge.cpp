// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scenetok/scene_merge.hpp"

namespace scenetok {

namespace {

Matrix normalized_rows(const Matrix& tokens) {
    Matrix out = tokens;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        auto row = out.row(i);
        const double n = norm(row);
        if (n > 0.0) {
            for (double& v : row) {
                v /= n;
            }
        }
    }
    return out;
}

// Tokens removed in one round. Capping at half the remaining budget keeps
// enough high-similarity pairs available in each round when many tokens are
// duplicates; the quarter cap keeps both partitions populated.
std::size_t merges_this_round(std::size_t remaining, std::size_t current) {
    return std::max<std::size_t>(1, std::min(remaining / 2, current / 4));
}

}  // namespace

SizedTokens bsm_merge(const Matrix& input, std::size_t target) {
    const std::size_t t0 = input.rows();
    require(t0 >= 1 && input.cols() >= 1, ErrorKind::Parameter, "bsm_merge: empty token matrix");
    require(target >= 1 && target <= t0, ErrorKind::Parameter,
            "bsm_merge: target must be in [1, " + std::to_string(t0) + "], got " + std::to_string(target));
    for (double v : input.values()) {
        require(std::isfinite(v), ErrorKind::Validation, "bsm_merge: non-finite token value");
    }

    const std::size_t dim = input.cols();
    Matrix tokens = input;
    std::vector<std::size_t> sizes(t0, 1);
    std::size_t remaining = t0 - target;

    while (remaining > 0) {
        const std::size_t current = tokens.rows();
        const std::size_t step = merges_this_round(remaining, current);
        const Matrix metric = normalized_rows(tokens);

        // A = even positions, B = odd. Each A token proposes its most similar B token.
        struct Proposal {
            double score;
            std::size_t src;
            std::size_t dst;
        };
        std::vector<Proposal> proposals;
        for (std::size_t a = 0; a < current; a += 2) {
            Proposal best{-std::numeric_limits<double>::infinity(), a, 1};
            for (std::size_t b = 1; b < current; b += 2) {
                const double score = dot(metric.row(a), metric.row(b));
                if (score > best.score) {
                    best.score = score;
                    best.dst = b;
                }
            }
            proposals.push_back(best);
        }
        std::stable_sort(proposals.begin(), proposals.end(),
                         [](const Proposal& x, const Proposal& y) { return x.score > y.score; });

        // Destinations become size-weighted averages of everything folded into them.
        std::vector<bool> removed(current, false);
        std::vector<bool> touched(current, false);
        Matrix mass(current, dim);
        std::vector<std::size_t> new_sizes = sizes;
        for (std::size_t i = 0; i < current; ++i) {
            auto row = mass.row(i);
            const auto src = tokens.row(i);
            for (std::size_t x = 0; x < dim; ++x) {
                row[x] = src[x] * static_cast<double>(sizes[i]);
            }
        }
        for (std::size_t e = 0; e < step; ++e) {
            const Proposal& p = proposals[e];
            auto dst = mass.row(p.dst);
            const auto src = mass.row(p.src);
            for (std::size_t x = 0; x < dim; ++x) {
                dst[x] += src[x];
            }
            new_sizes[p.dst] += new_sizes[p.src];
            removed[p.src] = true;
            touched[p.dst] = true;
        }

        // Survivors keep their relative order.
        Matrix next(current - step, dim);
        std::vector<std::size_t> next_sizes;
        next_sizes.reserve(current - step);
        std::size_t out = 0;
        for (std::size_t i = 0; i < current; ++i) {
            if (removed[i]) {
                continue;
            }
            auto row = next.row(out++);
            if (touched[i]) {
                const auto src = mass.row(i);
                const double total = static_cast<double>(new_sizes[i]);
                for (std::size_t x = 0; x < dim; ++x) {
                    row[x] = src[x] / total;
                }
            } else {
                const auto src = tokens.row(i);
                std::copy(src.begin(), src.end(), row.begin());
            }
            next_sizes.push_back(new_sizes[i]);
        }
        tokens = std::move(next);
        sizes = std::move(next_sizes);
        remaining -= step;
    }
    return SizedTokens{std::move(tokens), std::move(sizes)};
}

}  // namespace scenetok
