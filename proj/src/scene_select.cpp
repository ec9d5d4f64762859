// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenetok/scene_select.hpp"

#include <algorithm>
#include <cmath>

namespace scenetok {

namespace {

// Cosine similarity that treats a zero vector as orthogonal to everything
// except another zero vector. Scoring paths use this so a blank frame cannot
// abort selection.
double similarity_or_zero(std::span<const double> a, std::span<const double> b) {
    const double na = norm(a);
    const double nb = norm(b);
    if (na == 0.0 || nb == 0.0) {
        return (na == 0.0 && nb == 0.0) ? 1.0 : 0.0;
    }
    return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

void check_feasible(std::size_t n, std::size_t k, std::size_t r) {
    require(k >= 1, ErrorKind::Parameter, "scene count k must be >= 1");
    require(k * (r + 1) <= n, ErrorKind::Parameter,
            "cannot form " + std::to_string(k) + " disjoint scenes of " + std::to_string(r + 1) + " frames from " +
                std::to_string(n) + " frames (k*(r+1) = " + std::to_string(k * (r + 1)) + ")");
}

}  // namespace

RepFeatures representative_features(const FrameFeatures& features) {
    features.validate();
    const std::size_t n = features.frames();
    const std::size_t l = features.patches();
    const std::size_t d = features.dim();
    RepFeatures reps(n, d);
    for (std::size_t f = 0; f < n; ++f) {
        auto row = reps.row(f);
        for (std::size_t p = 0; p < l; ++p) {
            for (std::size_t k = 0; k < d; ++k) {
                row[k] += features.data(f, p, k);
            }
        }
        for (double& v : row) {
            v /= static_cast<double>(l);
        }
    }
    return reps;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), ErrorKind::Parameter, "cosine_similarity: length mismatch");
    const double na = norm(a);
    const double nb = norm(b);
    require(na > 0.0 && nb > 0.0, ErrorKind::Degenerate, "cosine_similarity: zero-norm vector");
    return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

std::size_t SceneSet::retained_frames() const {
    std::size_t total = 0;
    for (const auto& s : scenes) {
        total += s.members.size();
    }
    return total;
}

void SceneSet::validate(std::size_t n_frames) const {
    std::vector<bool> seen(n_frames, false);
    for (std::size_t i = 0; i < scenes.size(); ++i) {
        const Scene& s = scenes[i];
        const std::string where = "scene " + std::to_string(i);
        require(!s.members.empty(), ErrorKind::Validation, where + " has no members");
        require(i == 0 || scenes[i - 1].representative < s.representative, ErrorKind::Validation,
                where + ": scenes must be ordered by representative");
        require(std::find(s.members.begin(), s.members.end(), s.representative) != s.members.end(),
                ErrorKind::Validation, where + " does not contain its representative");
        for (std::size_t m = 0; m < s.members.size(); ++m) {
            const std::size_t f = s.members[m];
            require(f < n_frames, ErrorKind::Validation, where + ": frame " + std::to_string(f) + " out of range");
            require(m == 0 || s.members[m - 1] < f, ErrorKind::Validation, where + ": members not strictly increasing");
            require(!seen[f], ErrorKind::Validation, where + ": frame " + std::to_string(f) + " already used");
            seen[f] = true;
        }
    }
}

SceneSet select_supplements(const RepFeatures& reps, std::span<const std::size_t> rep_indices, std::size_t r,
                            SupplementOrder order) {
    const std::size_t n = reps.rows();
    for (std::size_t i = 0; i < rep_indices.size(); ++i) {
        require(rep_indices[i] < n, ErrorKind::Parameter,
                "representative index " + std::to_string(rep_indices[i]) + " out of range");
        require(i == 0 || rep_indices[i - 1] < rep_indices[i], ErrorKind::Parameter,
                "representative indices must be strictly increasing");
    }

    const std::size_t k = rep_indices.size();
    SceneSet out;
    out.k = k;
    out.r = r;
    out.scenes.resize(k);

    std::vector<bool> claimed(n, false);
    for (std::size_t i = 0; i < k; ++i) {
        out.scenes[i].representative = rep_indices[i];
        out.scenes[i].members.push_back(rep_indices[i]);
        claimed[rep_indices[i]] = true;
    }

    // Takes up to `want` unclaimed frames from [lo, hi) for scene i, best score first, ties to the earlier frame.
    auto take_from = [&](std::size_t i, std::size_t lo, std::size_t hi, std::size_t want) {
        const auto anchor = reps.row(rep_indices[i]);
        std::vector<std::pair<double, std::size_t>> ranked;
        for (std::size_t j = lo; j < hi; ++j) {
            if (!claimed[j]) {
                double s = similarity_or_zero(anchor, reps.row(j));
                ranked.emplace_back(order == SupplementOrder::MostSimilar ? -s : s, j);
            }
        }
        std::sort(ranked.begin(), ranked.end());
        std::size_t taken = 0;
        for (const auto& [score, j] : ranked) {
            if (taken == want) {
                break;
            }
            claimed[j] = true;
            out.scenes[i].members.push_back(j);
            ++taken;
        }
    };
    auto missing = [&](std::size_t i) { return r + 1 - out.scenes[i].members.size(); };

    // History windows (previous representative, this representative) are disjoint.
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t lo = i == 0 ? 0 : rep_indices[i - 1] + 1;
        take_from(i, lo, rep_indices[i], r);
    }
    // Short history: look ahead to the next representative.
    for (std::size_t i = 0; i < k; ++i) {
        if (missing(i) > 0) {
            const std::size_t hi = i + 1 < k ? rep_indices[i + 1] : n;
            take_from(i, rep_indices[i] + 1, hi, missing(i));
        }
    }
    // Still short: any unclaimed frame.
    for (std::size_t i = 0; i < k; ++i) {
        if (missing(i) > 0) {
            take_from(i, 0, n, missing(i));
            out.warnings.push_back("scene " + std::to_string(i) + " (frame " + std::to_string(rep_indices[i]) +
                                   "): supplemented from outside its neighbouring windows");
        }
        if (missing(i) > 0) {
            out.warnings.push_back("scene " + std::to_string(i) + " (frame " + std::to_string(rep_indices[i]) +
                                   "): only " + std::to_string(out.scenes[i].members.size() - 1) + " of " +
                                   std::to_string(r) + " supplements available");
        }
        std::sort(out.scenes[i].members.begin(), out.scenes[i].members.end());
    }
    return out;
}

SceneSet select_scenes_kmeans(const FrameFeatures& features, std::size_t k, std::size_t r,
                              const SelectParams& params) {
    check_feasible(features.frames(), k, r);
    const RepFeatures reps = representative_features(features);
    const Clustering clustering = kmeans(reps, k, params.kmeans);
    const auto reps_idx = distinct_representative_indices(reps, clustering);
    SceneSet out = select_supplements(reps, reps_idx, r, params.order);

    const std::size_t unique = representative_indices(reps, clustering).size();
    if (unique < k) {
        out.warnings.insert(out.warnings.begin(),
                            std::to_string(k - unique) +
                                " cluster center(s) shared a nearest frame; used the next-nearest unclaimed frame");
    }
    return out;
}

SceneSet select_scenes_bsm(const FrameFeatures& features, std::size_t k, std::size_t r) {
    const std::size_t n = features.frames();
    check_feasible(n, k, r);
    const RepFeatures reps = representative_features(features);
    const std::size_t edges_per_node = std::max<std::size_t>(r, 1);

    SceneSet out;
    out.k = k;
    out.r = r;
    for (std::size_t seg = 0; seg < k; ++seg) {
        const std::size_t lo = seg * n / k;
        const std::size_t hi = (seg + 1) * n / k;

        struct Edge {
            double sim;
            std::size_t a;
            std::size_t b;
        };
        std::vector<Edge> edges;
        // A = even local positions, B = odd.
        for (std::size_t a = lo; a < hi; a += 2) {
            std::vector<Edge> local;
            for (std::size_t b = lo + 1; b < hi; b += 2) {
                local.push_back({similarity_or_zero(reps.row(a), reps.row(b)), a, b});
            }
            std::stable_sort(local.begin(), local.end(), [](const Edge& x, const Edge& y) { return x.sim > y.sim; });
            local.resize(std::min(local.size(), edges_per_node));
            edges.insert(edges.end(), local.begin(), local.end());
        }
        std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
            if (x.sim != y.sim) {
                return x.sim > y.sim;
            }
            return x.a != y.a ? x.a < y.a : x.b < y.b;
        });

        std::vector<std::size_t> picked;
        auto add = [&](std::size_t f) {
            if (picked.size() < r + 1 && std::find(picked.begin(), picked.end(), f) == picked.end()) {
                picked.push_back(f);
            }
        };
        for (const Edge& e : edges) {
            add(e.a);
            add(e.b);
        }
        for (std::size_t f = lo; f < hi; ++f) {
            add(f);
        }

        Scene scene;
        scene.representative = picked.front();
        scene.members = picked;
        std::sort(scene.members.begin(), scene.members.end());
        out.scenes.push_back(std::move(scene));
    }
    return out;
}

}  // namespace scenetok
