#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wavemotion/filter_bank.hpp"
#include "wavemotion/types.hpp"

namespace wavemotion {

/// The eight subbands of one decomposition level, labelled (y, x, t) with
/// H = 1 encoded as a bit per axis: LLL=0, LLH=1, ... HHH=7.
enum class Subband : int {
    LLL = 0, LLH = 1, LHL = 2, LHH = 3,
    HLL = 4, HLH = 5, HHL = 6, HHH = 7,
};

inline constexpr std::array<Subband, 8> kAllSubbands = {
    Subband::LLL, Subband::LLH, Subband::LHL, Subband::LHH,
    Subband::HLL, Subband::HLH, Subband::HHL, Subband::HHH,
};

inline constexpr std::array<Subband, 7> kDetailSubbands = {
    Subband::LLH, Subband::LHL, Subband::LHH,
    Subband::HLL, Subband::HLH, Subband::HHL, Subband::HHH,
};

inline bool subband_high_y(Subband s) { return (static_cast<int>(s) & 4) != 0; }
inline bool subband_high_x(Subband s) { return (static_cast<int>(s) & 2) != 0; }
inline bool subband_high_t(Subband s) { return (static_cast<int>(s) & 1) != 0; }

inline const char* subband_name(Subband s) {
    static constexpr const char* names[8] = {"LLL", "LLH", "LHL", "LHH",
                                             "HLL", "HLH", "HHL", "HHH"};
    return names[static_cast<int>(s)];
}

inline std::optional<Subband> parse_subband(const std::string& s) {
    for (Subband b : kAllSubbands)
        if (s == subband_name(b)) return b;
    return std::nullopt;
}

/// One-level 1D analysis: periodic (circular) correlation with the low and
/// high taps, keeping even-phase outputs. Output length is ceil(n/2) for
/// both channels. For even n the map is orthogonal, so energy is conserved.
inline void dwt1d(std::span<const double> signal, const FilterBank& bank,
                  std::span<double> approx, std::span<double> detail) {
    const int n = static_cast<int>(signal.size());
    if (n < 2) throw std::invalid_argument("dwt1d: signal must have >= 2 samples");
    const int half = (n + 1) / 2;
    const int taps = static_cast<int>(bank.low.size());
    for (int k = 0; k < half; ++k) {
        double lo = 0.0, hi = 0.0;
        for (int i = 0; i < taps; ++i) {
            const double v = signal[(2 * k + i) % n];
            lo += bank.low[i] * v;
            hi += bank.high[i] * v;
        }
        approx[k] = lo;
        detail[k] = hi;
    }
}

inline std::pair<std::vector<double>, std::vector<double>> dwt1d(
    std::span<const double> signal, const FilterBank& bank) {
    const std::size_t half = (signal.size() + 1) / 2;
    std::vector<double> approx(half), detail(half);
    dwt1d(signal, bank, approx, detail);
    return {std::move(approx), std::move(detail)};
}

namespace detail_dwt {

/// Splits `src` along one axis into the low/high halves. An axis of extent 1
/// is passed through: low = identity, high = zeros.
/// axis: 0 = y, 1 = x, 2 = t.
inline void split_axis(const Volume& src, int axis, const FilterBank& bank,
                       Volume& low_out, Volume& high_out) {
    const int n = axis == 0 ? src.ny : axis == 1 ? src.nx : src.nt;
    const int half = (n + 1) / 2;
    int ny = src.ny, nx = src.nx, nt = src.nt;
    (axis == 0 ? ny : axis == 1 ? nx : nt) = half;
    low_out = Volume(ny, nx, nt);
    high_out = Volume(ny, nx, nt);
    if (n == 1) {
        low_out.data = src.data;  // pass-through, high stays zero
        return;
    }
    std::vector<double> line(static_cast<std::size_t>(n));
    std::vector<double> lo(static_cast<std::size_t>(half)), hi(static_cast<std::size_t>(half));
    const int ua = axis == 0 ? src.nx : src.ny;  // first cross axis extent
    const int ub = axis == 2 ? src.nx : src.nt;  // second cross axis extent
    for (int a = 0; a < ua; ++a) {
        for (int b = 0; b < ub; ++b) {
            for (int i = 0; i < n; ++i) {
                line[static_cast<std::size_t>(i)] =
                    axis == 0 ? src.at(i, a, b) : axis == 1 ? src.at(a, i, b) : src.at(a, b, i);
            }
            dwt1d(line, bank, lo, hi);
            for (int i = 0; i < half; ++i) {
                if (axis == 0) {
                    low_out.at(i, a, b) = lo[static_cast<std::size_t>(i)];
                    high_out.at(i, a, b) = hi[static_cast<std::size_t>(i)];
                } else if (axis == 1) {
                    low_out.at(a, i, b) = lo[static_cast<std::size_t>(i)];
                    high_out.at(a, i, b) = hi[static_cast<std::size_t>(i)];
                } else {
                    low_out.at(a, b, i) = lo[static_cast<std::size_t>(i)];
                    high_out.at(a, b, i) = hi[static_cast<std::size_t>(i)];
                }
            }
        }
    }
}

inline std::array<Volume, 8> level_impl(const Volume& vol, const FilterBank& bank) {
    // y, then x, then t; the axis order is fixed for bit-reproducibility.
    Volume ly, hy;
    split_axis(vol, 0, bank, ly, hy);
    Volume ll, lh, hl, hh;
    split_axis(ly, 1, bank, ll, lh);
    split_axis(hy, 1, bank, hl, hh);
    std::array<Volume, 8> out;
    split_axis(ll, 2, bank, out[0], out[1]);  // LLL, LLH
    split_axis(lh, 2, bank, out[2], out[3]);  // LHL, LHH
    split_axis(hl, 2, bank, out[4], out[5]);  // HLL, HLH
    split_axis(hh, 2, bank, out[6], out[7]);  // HHL, HHH
    return out;
}

}  // namespace detail_dwt

/// One level of the separable 3D analysis: eight subbands keyed by Subband.
/// Requires every extent >= 2 (the recursive `decompose` relaxes this with
/// axis pass-through).
inline std::array<Volume, 8> dwt3d_level(const Volume& vol, const FilterBank& bank) {
    if (vol.ny < 2 || vol.nx < 2 || vol.nt < 2)
        throw std::invalid_argument("dwt3d_level: every extent must be >= 2");
    return detail_dwt::level_impl(vol, bank);
}

/// One scale of a pyramid: the eight subbands plus which axes were actually
/// filtered (extent-1 axes are passed through unchanged).
struct PyramidLevel {
    std::array<Volume, 8> bands;
    std::array<bool, 3> filtered{};  // y, x, t

    const Volume& band(Subband s) const { return bands[static_cast<std::size_t>(s)]; }
    Volume& band(Subband s) { return bands[static_cast<std::size_t>(s)]; }
};

/// Recursive octave decomposition: level 1 analyses the input, level s+1
/// analyses level s's LLL. Extents shrink by ceil division along each
/// filtered axis.
struct WaveletPyramid {
    std::vector<PyramidLevel> levels;

    int scales() const { return static_cast<int>(levels.size()); }
    const PyramidLevel& level(int s) const { return levels[static_cast<std::size_t>(s - 1)]; }
};

/// Largest scale count `decompose` accepts for the given extents: levels
/// keep halving (with pass-through on exhausted axes) until all three
/// extents reach 1.
inline int max_scales(int ny, int nx, int nt) {
    int s = 0;
    while (ny > 1 || nx > 1 || nt > 1) {
        ny = (ny + 1) / 2;
        nx = (nx + 1) / 2;
        nt = (nt + 1) / 2;
        ++s;
    }
    return s;
}

inline WaveletPyramid decompose(const Volume& vol, const FilterBank& bank, int scales) {
    if (scales < 1) throw std::invalid_argument("decompose: scales must be >= 1");
    if (scales > max_scales(vol.ny, vol.nx, vol.nt))
        throw std::invalid_argument("decompose: " + std::to_string(scales) +
                                    " scales exceed what extents " + std::to_string(vol.ny) +
                                    "x" + std::to_string(vol.nx) + "x" + std::to_string(vol.nt) +
                                    " allow");
    WaveletPyramid pyr;
    pyr.levels.reserve(static_cast<std::size_t>(scales));
    const Volume* parent = &vol;
    for (int s = 0; s < scales; ++s) {
        PyramidLevel lvl;
        lvl.filtered = {parent->ny > 1, parent->nx > 1, parent->nt > 1};
        lvl.bands = detail_dwt::level_impl(*parent, bank);
        pyr.levels.push_back(std::move(lvl));
        parent = &pyr.levels.back().bands[0];
    }
    return pyr;
}

}  // namespace wavemotion
