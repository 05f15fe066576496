// Test-only reference implementations, kept independent of the library's
// computation paths: dense-matrix transforms, explicit dyadic-cone
// enumeration, exact rational metrics.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "wavemotion/descriptor.hpp"
#include "wavemotion/dwt.hpp"
#include "wavemotion/filter_bank.hpp"
#include "wavemotion/metrics.hpp"
#include "wavemotion/types.hpp"
#include "wavemotion/wavelet_leader.hpp"

namespace oracle {

using wavemotion::Channel;
using wavemotion::ChannelSet;
using wavemotion::FilterBank;
using wavemotion::LeaderOptions;
using wavemotion::PatchSpec;
using wavemotion::Subband;
using wavemotion::Volume;
using wavemotion::WaveletPyramid;

/// Dense analysis matrix for one axis: row k of the approx (detail) half is
/// the circularly shifted low (high) filter at offset 2k. Returns a
/// (2*ceil(n/2)) x n matrix, approx rows first.
inline std::vector<std::vector<double>> analysis_matrix(int n, const FilterBank& bank) {
    const int half = (n + 1) / 2;
    std::vector<std::vector<double>> m(static_cast<std::size_t>(2 * half),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int k = 0; k < half; ++k) {
        for (std::size_t i = 0; i < bank.low.size(); ++i) {
            const int j = (2 * k + static_cast<int>(i)) % n;
            m[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] += bank.low[i];
            m[static_cast<std::size_t>(half + k)][static_cast<std::size_t>(j)] += bank.high[i];
        }
    }
    return m;
}

/// One separable level via dense matrix products, axes applied t, x, y —
/// deliberately the reverse of the implementation's order.
inline std::array<Volume, 8> level_by_matrix(const Volume& vol, const FilterBank& bank) {
    const int hy = (vol.ny + 1) / 2, hx = (vol.nx + 1) / 2, ht = (vol.nt + 1) / 2;
    // working copy with both halves stacked per axis as we go
    // stage 1: t axis
    std::vector<double> stage_t(static_cast<std::size_t>(vol.ny) * vol.nx * 2 * ht, 0.0);
    auto at_t = [&](int y, int x, int t) -> double& {
        return stage_t[(static_cast<std::size_t>(y) * vol.nx + x) * (2 * ht) + t];
    };
    if (vol.nt == 1) {
        for (int y = 0; y < vol.ny; ++y)
            for (int x = 0; x < vol.nx; ++x) at_t(y, x, 0) = vol.at(y, x, 0);
    } else {
        const auto mt = analysis_matrix(vol.nt, bank);
        for (int y = 0; y < vol.ny; ++y)
            for (int x = 0; x < vol.nx; ++x)
                for (int r = 0; r < 2 * ht; ++r) {
                    double acc = 0.0;
                    for (int t = 0; t < vol.nt; ++t)
                        acc += mt[static_cast<std::size_t>(r)][static_cast<std::size_t>(t)] *
                               vol.at(y, x, t);
                    at_t(y, x, r) = acc;
                }
    }
    // stage 2: x axis
    std::vector<double> stage_x(static_cast<std::size_t>(vol.ny) * 2 * hx * 2 * ht, 0.0);
    auto at_x = [&](int y, int x, int t) -> double& {
        return stage_x[(static_cast<std::size_t>(y) * (2 * hx) + x) * (2 * ht) + t];
    };
    if (vol.nx == 1) {
        for (int y = 0; y < vol.ny; ++y)
            for (int t = 0; t < 2 * ht; ++t) at_x(y, 0, t) = at_t(y, 0, t);
    } else {
        const auto mx = analysis_matrix(vol.nx, bank);
        for (int y = 0; y < vol.ny; ++y)
            for (int t = 0; t < 2 * ht; ++t)
                for (int r = 0; r < 2 * hx; ++r) {
                    double acc = 0.0;
                    for (int x = 0; x < vol.nx; ++x)
                        acc += mx[static_cast<std::size_t>(r)][static_cast<std::size_t>(x)] *
                               at_t(y, x, t);
                    at_x(y, r, t) = acc;
                }
    }
    // stage 3: y axis
    std::vector<double> stage_y(static_cast<std::size_t>(2 * hy) * 2 * hx * 2 * ht, 0.0);
    auto at_y = [&](int y, int x, int t) -> double& {
        return stage_y[(static_cast<std::size_t>(y) * (2 * hx) + x) * (2 * ht) + t];
    };
    if (vol.ny == 1) {
        for (int x = 0; x < 2 * hx; ++x)
            for (int t = 0; t < 2 * ht; ++t) at_y(0, x, t) = at_x(0, x, t);
    } else {
        const auto my = analysis_matrix(vol.ny, bank);
        for (int x = 0; x < 2 * hx; ++x)
            for (int t = 0; t < 2 * ht; ++t)
                for (int r = 0; r < 2 * hy; ++r) {
                    double acc = 0.0;
                    for (int y = 0; y < vol.ny; ++y)
                        acc += my[static_cast<std::size_t>(r)][static_cast<std::size_t>(y)] *
                               at_x(y, x, t);
                    at_y(r, x, t) = acc;
                }
    }
    // slice the eight octants; H along a pass-through axis stays all-zero
    std::array<Volume, 8> out;
    for (int b = 0; b < 8; ++b) {
        const bool highy = (b & 4) != 0, highx = (b & 2) != 0, hight = (b & 1) != 0;
        Volume v(hy, hx, ht);
        const bool zero = (highy && vol.ny == 1) || (highx && vol.nx == 1) ||
                          (hight && vol.nt == 1);
        if (!zero) {
            for (int y = 0; y < hy; ++y)
                for (int x = 0; x < hx; ++x)
                    for (int t = 0; t < ht; ++t)
                        v.at(y, x, t) = at_y(y + (highy ? hy : 0), x + (highx ? hx : 0),
                                             t + (hight ? ht : 0));
        }
        out[static_cast<std::size_t>(b)] = std::move(v);
    }
    return out;
}

struct PyramidOracle {
    std::vector<std::array<Volume, 8>> levels;
    std::vector<std::array<bool, 3>> filtered;
};

inline PyramidOracle decompose_by_matrix(const Volume& vol, const FilterBank& bank,
                                         int scales) {
    PyramidOracle pyr;
    Volume current = vol;
    for (int s = 0; s < scales; ++s) {
        pyr.filtered.push_back({current.ny > 1, current.nx > 1, current.nt > 1});
        pyr.levels.push_back(level_by_matrix(current, bank));
        current = pyr.levels.back()[0];
    }
    return pyr;
}

/// Explicit dyadic-cone leader: for every coarse cell, enumerate every cell
/// of every included scale and keep those that floor-halve onto it.
inline std::vector<Volume> leaders_by_enumeration(const WaveletPyramid& pyr,
                                                  const LeaderOptions& opts = {}) {
    std::vector<Volume> out;
    for (int s = 1; s <= pyr.scales(); ++s) {
        const Volume& ref = pyr.level(s).band(Subband::LLL);
        Volume lead(ref.ny, ref.nx, ref.nt);
        const int s_lo = opts.same_scale_only ? s : 1;
        for (int y = 0; y < ref.ny; ++y) {
            for (int x = 0; x < ref.nx; ++x) {
                for (int t = 0; t < ref.nt; ++t) {
                    double best = 0.0;
                    for (int sp = s_lo; sp <= s; ++sp) {
                        const auto& lvl = pyr.level(sp);
                        const Volume& any = lvl.band(Subband::LLL);
                        for (int yy = 0; yy < any.ny; ++yy) {
                            for (int xx = 0; xx < any.nx; ++xx) {
                                for (int tt = 0; tt < any.nt; ++tt) {
                                    int cy = yy, cx = xx, ct = tt;
                                    for (int l = sp + 1; l <= s; ++l) {
                                        const auto& f = pyr.level(l).filtered;
                                        if (f[0]) cy /= 2;
                                        if (f[1]) cx /= 2;
                                        if (f[2]) ct /= 2;
                                    }
                                    if (cy != y || cx != x || ct != t) continue;
                                    for (Subband sb : opts.subbands) {
                                        const double v =
                                            std::abs(lvl.band(sb).at(yy, xx, tt));
                                        if (v > best) best = v;
                                    }
                                }
                            }
                        }
                    }
                    lead.at(y, x, t) = best;
                }
            }
        }
        out.push_back(std::move(lead));
    }
    return out;
}

/// Descriptor through the oracle transform and oracle leaders.
inline std::vector<double> descriptor_by_matrix(const Volume& patch, const FilterBank& bank,
                                                const PatchSpec& spec,
                                                const ChannelSet& channels,
                                                const LeaderOptions& leader_opts = {}) {
    const int S = spec.resolved_scales();
    const PyramidOracle pyr = decompose_by_matrix(patch, bank, S);
    // reuse the enumeration oracle by adapting to the library pyramid type
    WaveletPyramid lib_pyr;
    for (int s = 0; s < S; ++s) {
        wavemotion::PyramidLevel lvl;
        lvl.bands = pyr.levels[static_cast<std::size_t>(s)];
        lvl.filtered = pyr.filtered[static_cast<std::size_t>(s)];
        lib_pyr.levels.push_back(std::move(lvl));
    }
    const std::vector<Volume> lead = leaders_by_enumeration(lib_pyr, leader_opts);

    const double denom = 0.5 * S * (S + 1);
    std::vector<double> out;
    for (Channel c : channels) {
        double sum = 0.0;
        for (int s = 1; s <= S; ++s) {
            const Volume& v = c == Channel::Leader
                                  ? lead[static_cast<std::size_t>(s - 1)]
                                  : lib_pyr.level(s).band(static_cast<Subband>(c));
            double energy = 0.0;
            for (double w : v.data) energy += w * w;
            sum += std::sqrt(energy);
        }
        out.push_back(sum / denom);
    }
    return out;
}

/// Exact rational metric evaluation (counts fit comfortably in 64 bits).
struct Rational {
    long long num = 0;
    long long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct RationalMetrics {
    Rational re, sp, fpr, fnr, pwc, precision, f_measure;
};

inline RationalMetrics metrics_by_rational(long long tp, long long tn, long long fp,
                                           long long fn) {
    RationalMetrics m;
    m.re = (tp + fn) > 0 ? Rational{tp, tp + fn} : Rational{0, 1};
    m.sp = (tn + fp) > 0 ? Rational{tn, tn + fp} : Rational{0, 1};
    m.fpr = (tn + fp) > 0 ? Rational{fp, tn + fp} : Rational{0, 1};
    m.fnr = (tp + fn) > 0 ? Rational{fn, tp + fn} : Rational{0, 1};
    m.pwc = Rational{100 * (fn + fp), tp + tn + fp + fn};
    m.precision = (tp + fp) > 0 ? Rational{tp, tp + fp} : Rational{0, 1};
    // harmonic mean collapses to 2TP / (2TP + FP + FN) — an independent route
    m.f_measure = (2 * tp + fp + fn) > 0 && tp > 0 ? Rational{2 * tp, 2 * tp + fp + fn}
                                                   : Rational{0, 1};
    return m;
}

inline double volume_energy(const Volume& v) {
    double e = 0.0;
    for (double c : v.data) e += c * c;
    return e;
}

inline Volume random_volume(int ny, int nx, int nt, std::mt19937_64& rng) {
    Volume v(ny, nx, nt);
    for (auto& c : v.data) c = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    return v;
}

}  // namespace oracle
