#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "wavemotion/dwt.hpp"
#include "wavemotion/types.hpp"

namespace wavemotion {

/// Controls which coefficients feed the leader max.
struct LeaderOptions {
    /// Detail subbands included in the max. Defaults to all seven; the
    /// restricted variant uses only {LLH, LHH, HLH}.
    std::vector<Subband> subbands{kDetailSubbands.begin(), kDetailSubbands.end()};
    /// When false (default), the scale-s leader covers scales 1..s through
    /// the dyadic cone; when true it is confined to scale s alone.
    bool same_scale_only = false;
};

inline LeaderOptions restricted_leader_options() {
    LeaderOptions o;
    o.subbands = {Subband::LLH, Subband::LHH, Subband::HLH};
    return o;
}

/// Per-scale volumes of leader values; level s has the same extents as the
/// scale-s detail subbands.
struct LeaderPyramid {
    std::vector<Volume> levels;

    int scales() const { return static_cast<int>(levels.size()); }
    const Volume& level(int s) const { return levels[static_cast<std::size_t>(s - 1)]; }
};

namespace detail_leader {

/// Max-reduces a finer-scale volume onto the coarser grid: fine cell c maps
/// to floor(c/2) along each filtered axis and stays put along pass-through
/// axes.
inline Volume coarsen_max(const Volume& fine, const std::array<bool, 3>& filtered,
                          int ny, int nx, int nt) {
    Volume out(ny, nx, nt);
    for (int t = 0; t < fine.nt; ++t) {
        const int tc = filtered[2] ? t / 2 : t;
        for (int y = 0; y < fine.ny; ++y) {
            const int yc = filtered[0] ? y / 2 : y;
            for (int x = 0; x < fine.nx; ++x) {
                const int xc = filtered[1] ? x / 2 : x;
                double& slot = out.at(yc, xc, tc);
                const double v = fine.at(y, x, t);
                if (v > slot) slot = v;
            }
        }
    }
    return out;
}

}  // namespace detail_leader

/// Wavelet-leader pyramid: the leader at scale s and cell q is the largest
/// detail-coefficient magnitude over the selected subbands, across scales
/// 1..s, among cells whose dyadic support lies over q. Computed
/// incrementally: scale-s leaders = max(scale-s details, coarsened
/// scale-(s-1) leaders).
inline LeaderPyramid leaders(const WaveletPyramid& pyr, const LeaderOptions& opts = {}) {
    if (pyr.scales() < 1) throw std::invalid_argument("leaders: pyramid has no levels");
    LeaderPyramid out;
    out.levels.reserve(static_cast<std::size_t>(pyr.scales()));
    for (int s = 1; s <= pyr.scales(); ++s) {
        const PyramidLevel& lvl = pyr.level(s);
        const Volume& ref = lvl.band(Subband::LLL);
        Volume lead(ref.ny, ref.nx, ref.nt);
        if (!opts.same_scale_only && s > 1) {
            lead = detail_leader::coarsen_max(out.levels.back(), lvl.filtered,
                                              ref.ny, ref.nx, ref.nt);
        }
        for (Subband sb : opts.subbands) {
            const Volume& band = lvl.band(sb);
            for (std::size_t i = 0; i < band.data.size(); ++i) {
                const double v = std::abs(band.data[i]);
                if (v > lead.data[i]) lead.data[i] = v;
            }
        }
        out.levels.push_back(std::move(lead));
    }
    return out;
}

}  // namespace wavemotion
