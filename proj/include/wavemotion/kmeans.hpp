#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "wavemotion/descriptor.hpp"
#include "wavemotion/parallel.hpp"
#include "wavemotion/types.hpp"

namespace wavemotion {

struct KMeansParams {
    int k = 2;
    std::uint64_t seed = 42;
    int max_iters = 100;
    double tol = 1e-6;
    int workers = 0;
};

struct KMeansResult {
    std::vector<int> assignments;
    std::vector<double> centroids;  // k * dim
    int iterations = 0;
    bool converged = false;
};

namespace detail_kmeans {

inline double dist2(const double* a, const double* b, int dim) {
    double d = 0.0;
    for (int c = 0; c < dim; ++c) {
        const double t = a[c] - b[c];
        d += t * t;
    }
    return d;
}

/// Uniform double in [0, 1) from the top 53 bits of the engine output;
/// fully determined by the mt19937_64 spec, so results are portable.
inline double unit_real(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail_kmeans

/// Lloyd iterations with k-means++ seeding. Deterministic for a fixed seed:
/// the assignment step may run on any number of workers (per-point outputs,
/// no reductions) while seeding and the centroid update accumulate in point
/// order. Ties in the assignment go to the lower centroid index. Throws
/// DegenerateDataError when the input has fewer than k distinct points.
inline KMeansResult kmeans(std::span<const double> points, std::size_t n, int dim,
                           const KMeansParams& params = {}) {
    if (params.k < 2) throw std::invalid_argument("kmeans: k must be >= 2");
    if (params.max_iters < 1) throw std::invalid_argument("kmeans: max_iters must be >= 1");
    if (params.tol < 0) throw std::invalid_argument("kmeans: tol must be >= 0");
    if (n * static_cast<std::size_t>(dim) != points.size())
        throw std::invalid_argument("kmeans: point buffer size mismatch");
    const int k = params.k;

    // require >= k distinct points
    {
        std::vector<const double*> distinct;
        for (std::size_t i = 0; i < n && static_cast<int>(distinct.size()) < k; ++i) {
            const double* p = &points[i * dim];
            bool seen = false;
            for (const double* q : distinct) {
                bool eq = true;
                for (int c = 0; c < dim; ++c)
                    if (p[c] != q[c]) { eq = false; break; }
                if (eq) { seen = true; break; }
            }
            if (!seen) distinct.push_back(p);
        }
        if (static_cast<int>(distinct.size()) < k)
            throw DegenerateDataError("kmeans: fewer than " + std::to_string(k) +
                                      " distinct points");
    }

    std::mt19937_64 rng(params.seed);
    std::vector<double> centroids(static_cast<std::size_t>(k) * dim);
    std::vector<double> d2(n);

    // k-means++ seeding
    {
        const std::size_t first = static_cast<std::size_t>(rng() % n);
        std::copy_n(&points[first * dim], dim, centroids.begin());
        for (std::size_t i = 0; i < n; ++i)
            d2[i] = detail_kmeans::dist2(&points[i * dim], centroids.data(), dim);
        for (int c = 1; c < k; ++c) {
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) total += d2[i];
            std::size_t chosen = 0;
            if (total > 0.0) {
                const double r = detail_kmeans::unit_real(rng) * total;
                double cum = 0.0;
                chosen = n - 1;
                for (std::size_t i = 0; i < n; ++i) {
                    cum += d2[i];
                    if (cum > r) { chosen = i; break; }
                }
            }
            double* dst = &centroids[static_cast<std::size_t>(c) * dim];
            std::copy_n(&points[chosen * dim], dim, dst);
            for (std::size_t i = 0; i < n; ++i) {
                const double d = detail_kmeans::dist2(&points[i * dim], dst, dim);
                if (d < d2[i]) d2[i] = d;
            }
        }
    }

    KMeansResult result;
    result.assignments.assign(n, 0);
    const unsigned workers = resolve_workers(params.workers);
    std::vector<double> sums(static_cast<std::size_t>(k) * dim);
    std::vector<std::size_t> counts(static_cast<std::size_t>(k));

    for (int iter = 1; iter <= params.max_iters; ++iter) {
        result.iterations = iter;
        parallel_for(n, workers, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                const double* p = &points[i * dim];
                int best = 0;
                double best_d = detail_kmeans::dist2(p, centroids.data(), dim);
                for (int c = 1; c < k; ++c) {
                    const double d = detail_kmeans::dist2(
                        p, &centroids[static_cast<std::size_t>(c) * dim], dim);
                    if (d < best_d) { best_d = d; best = c; }
                }
                result.assignments[i] = best;
            }
        });

        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0u);
        for (std::size_t i = 0; i < n; ++i) {
            const int a = result.assignments[i];
            double* s = &sums[static_cast<std::size_t>(a) * dim];
            const double* p = &points[i * dim];
            for (int c = 0; c < dim; ++c) s[c] += p[c];
            ++counts[static_cast<std::size_t>(a)];
        }

        // an emptied cluster restarts at the point farthest from its centroid
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) continue;
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = detail_kmeans::dist2(
                    &points[i * dim],
                    &centroids[static_cast<std::size_t>(result.assignments[i]) * dim], dim);
                if (d > far_d) { far_d = d; far = i; }
            }
            std::copy_n(&points[far * dim], dim,
                        &sums[static_cast<std::size_t>(c) * dim]);
            counts[static_cast<std::size_t>(c)] = 1;
        }

        double max_shift2 = 0.0;
        for (int c = 0; c < k; ++c) {
            double* dst = &centroids[static_cast<std::size_t>(c) * dim];
            const double inv = 1.0 / static_cast<double>(counts[static_cast<std::size_t>(c)]);
            double shift2 = 0.0;
            for (int j = 0; j < dim; ++j) {
                const double updated = sums[static_cast<std::size_t>(c) * dim + j] * inv;
                const double d = updated - dst[j];
                shift2 += d * d;
                dst[j] = updated;
            }
            if (shift2 > max_shift2) max_shift2 = shift2;
        }
        if (std::sqrt(max_shift2) <= params.tol) {
            result.converged = true;
            break;
        }
    }

    // final assignment against the converged centroids
    parallel_for(n, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double* p = &points[i * dim];
            int best = 0;
            double best_d = detail_kmeans::dist2(p, centroids.data(), dim);
            for (int c = 1; c < k; ++c) {
                const double d = detail_kmeans::dist2(
                    p, &centroids[static_cast<std::size_t>(c) * dim], dim);
                if (d < best_d) { best_d = d; best = c; }
            }
            result.assignments[i] = best;
        }
    });

    result.centroids = std::move(centroids);
    return result;
}

inline double kmeans_wcss(std::span<const double> points, std::size_t n, int dim,
                          const std::vector<int>& assignments,
                          const std::vector<double>& centroids) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        total += detail_kmeans::dist2(
            &points[i * dim],
            &centroids[static_cast<std::size_t>(assignments[i]) * dim], dim);
    return total;
}

/// Decides which of two clusters is motion: the one whose centroid (in raw,
/// pre-normalization feature space) has the larger Euclidean norm over the
/// motion channels (every channel except LLL). A near-tie falls back to the
/// smaller cluster, so featureless inputs never flood the mask.
inline int motion_cluster_index(const std::vector<double>& raw_centroids, int dim,
                                const ChannelSet& channels,
                                const std::vector<std::size_t>& cluster_sizes) {
    double norm2[2] = {0.0, 0.0};
    for (int cl = 0; cl < 2; ++cl) {
        for (int c = 0; c < dim; ++c) {
            if (channels[static_cast<std::size_t>(c)] == Channel::LLL) continue;
            const double v = raw_centroids[static_cast<std::size_t>(cl) * dim + c];
            norm2[cl] += v * v;
        }
    }
    const double n0 = std::sqrt(norm2[0]);
    const double n1 = std::sqrt(norm2[1]);
    const double tie_eps = 1e-12 * std::max(1.0, std::max(n0, n1));
    if (std::abs(n0 - n1) <= tie_eps) {
        if (cluster_sizes[0] == cluster_sizes[1]) return n0 >= n1 ? 0 : 1;
        return cluster_sizes[0] < cluster_sizes[1] ? 0 : 1;
    }
    return n0 > n1 ? 0 : 1;
}

/// Turns per-pixel assignments into a binary mask. `raw_centroids` must be
/// the cluster means of the *unnormalized* field, matching `features`.
inline SegmentationMask label_clusters(const FeatureField& features,
                                       const std::vector<int>& assignments,
                                       const std::vector<double>& raw_centroids,
                                       const ChannelSet& channels) {
    const std::size_t pixels = static_cast<std::size_t>(features.height) * features.width;
    if (assignments.size() != pixels)
        throw std::invalid_argument("label_clusters: assignment count != pixel count");
    std::vector<std::size_t> sizes(2, 0);
    for (int a : assignments) ++sizes[static_cast<std::size_t>(a)];
    const int motion = motion_cluster_index(raw_centroids, features.dim, channels, sizes);
    SegmentationMask mask;
    mask.height = features.height;
    mask.width = features.width;
    mask.motion.resize(pixels);
    for (std::size_t i = 0; i < pixels; ++i)
        mask.motion[i] = assignments[i] == motion ? 1 : 0;
    return mask;
}

}  // namespace wavemotion
