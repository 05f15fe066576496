#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "wavemotion/dwt.hpp"
#include "wavemotion/parallel.hpp"
#include "wavemotion/types.hpp"
#include "wavemotion/wavelet_leader.hpp"

namespace wavemotion {

/// Cubic patch geometry and decomposition depth. With scales == 0 the depth
/// defaults to floor(log2(min extent)), which reproduces the reference
/// schedule for every supported patch size (e.g. 4x4x4 -> 2, 2x2x8 -> 1,
/// 8x8x8 -> 3).
struct PatchSpec {
    int py = 4;
    int px = 4;
    int pt = 4;
    int scales = 0;

    int resolved_scales() const {
        if (scales > 0) return scales;
        int m = std::min(py, std::min(px, pt));
        int s = 0;
        while (m >= 2) {
            m /= 2;
            ++s;
        }
        return s;
    }

    long long volume() const { return 1LL * py * px * pt; }

    std::string str() const {
        return std::to_string(py) + "x" + std::to_string(px) + "x" + std::to_string(pt);
    }
};

inline void validate_patch_spec(const PatchSpec& spec) {
    if (spec.py < 2 || spec.px < 2)
        throw ConfigError("patch " + spec.str() + ": spatial extents must be >= 2");
    if (spec.pt < 1) throw ConfigError("patch " + spec.str() + ": temporal extent must be >= 1");
    const int s = spec.resolved_scales();
    if (s < 1) throw ConfigError("patch " + spec.str() + ": no decomposition level fits");
    if (s > max_scales(spec.py, spec.px, spec.pt))
        throw ConfigError("patch " + spec.str() + ": " + std::to_string(s) +
                          " scales exceed what the extents allow");
}

/// A descriptor channel: one of the eight subbands or the leader.
enum class Channel : int {
    LLL = 0, LLH, LHL, LHH, HLL, HLH, HHL, HHH,
    Leader = 8,
};

inline const char* channel_name(Channel c) {
    return c == Channel::Leader ? "Leader" : subband_name(static_cast<Subband>(c));
}

inline std::optional<Channel> parse_channel(std::string s) {
    for (char& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (s == "LEADER") return Channel::Leader;
    if (auto sb = parse_subband(s)) return static_cast<Channel>(*sb);
    return std::nullopt;
}

using ChannelSet = std::vector<Channel>;

inline ChannelSet default_channels() {
    return {Channel::LLH, Channel::LHL, Channel::HLH, Channel::Leader};
}

inline void validate_channels(const ChannelSet& channels) {
    if (channels.empty()) throw ConfigError("channel set must not be empty");
    for (std::size_t i = 0; i < channels.size(); ++i)
        for (std::size_t j = i + 1; j < channels.size(); ++j)
            if (channels[i] == channels[j])
                throw ConfigError(std::string("duplicate channel ") +
                                  channel_name(channels[i]));
}

/// Copies the py*px*pt cube centered on (y, x, t) out of the sequence.
/// Even extents bias half a cell toward negative offsets (extent 4 spans
/// offsets -2..+1); out-of-range samples are reflected.
inline Volume extract_patch(const FrameSequence& seq, int y, int x, int t,
                            const PatchSpec& spec) {
    Volume patch(spec.py, spec.px, spec.pt);
    const int h = seq.height(), w = seq.width(), n = seq.size();
    const int oy = y - spec.py / 2;
    const int ox = x - spec.px / 2;
    const int ot = t - spec.pt / 2;
    for (int dt = 0; dt < spec.pt; ++dt) {
        const Frame& frame = seq.frames[static_cast<std::size_t>(reflect_index(ot + dt, n))];
        for (int dy = 0; dy < spec.py; ++dy) {
            const int yy = reflect_index(oy + dy, h);
            for (int dx = 0; dx < spec.px; ++dx) {
                patch.at(dy, dx, dt) = frame.at(yy, reflect_index(ox + dx, w));
            }
        }
    }
    return patch;
}

/// Per-pixel feature vectors for one frame, components ordered as the
/// channel set. Raw descriptors are nonnegative (they are norms); z-scored
/// fields may go negative.
struct FeatureField {
    int height = 0;
    int width = 0;
    int dim = 0;
    std::vector<double> values;  // (y * width + x) * dim + c

    double at(int y, int x, int c) const {
        return values[(static_cast<std::size_t>(y) * width + x) * dim + c];
    }
    std::size_t pixel_offset(int y, int x) const {
        return (static_cast<std::size_t>(y) * width + x) * dim;
    }
};

/// The scale-summed norm descriptor: for each channel, the per-scale
/// Euclidean norms of that channel's coefficients are summed over scales
/// 1..S and divided by 1 + 2 + ... + S.
inline std::vector<double> pixel_descriptor(const Volume& patch, const FilterBank& bank,
                                            const PatchSpec& spec, const ChannelSet& channels,
                                            const LeaderOptions& leader_opts = {}) {
    if (patch.ny != spec.py || patch.nx != spec.px || patch.nt != spec.pt)
        throw std::invalid_argument("pixel_descriptor: patch extents do not match spec");
    const int S = spec.resolved_scales();
    const WaveletPyramid pyr = decompose(patch, bank, S);
    bool want_leader = false;
    for (Channel c : channels) want_leader |= (c == Channel::Leader);
    LeaderPyramid lead;
    if (want_leader) lead = leaders(pyr, leader_opts);

    const double denom = 0.5 * S * (S + 1);
    std::vector<double> out(channels.size(), 0.0);
    for (std::size_t ci = 0; ci < channels.size(); ++ci) {
        double sum = 0.0;
        for (int s = 1; s <= S; ++s) {
            const Volume& v = channels[ci] == Channel::Leader
                                  ? lead.level(s)
                                  : pyr.level(s).band(static_cast<Subband>(channels[ci]));
            double energy = 0.0;
            for (double c : v.data) energy += c * c;
            sum += std::sqrt(energy);
        }
        out[ci] = sum / denom;
    }
    return out;
}

enum class StrideMode { PerPixel, Tiled };

struct FeatureFieldOptions {
    bool normalize = false;       // per-channel z-score across the field
    StrideMode stride = StrideMode::PerPixel;
    LeaderOptions leader;
    int workers = 0;
};

/// Applies an in-place per-channel z-score. Channels with (numerically)
/// zero spread are centered only.
inline void zscore_normalize(std::vector<double>& values, std::size_t count, int dim) {
    for (int c = 0; c < dim; ++c) {
        double mean = 0.0;
        for (std::size_t i = 0; i < count; ++i) mean += values[i * dim + c];
        mean /= static_cast<double>(count);
        double var = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            const double d = values[i * dim + c] - mean;
            var += d * d;
        }
        const double stddev = std::sqrt(var / static_cast<double>(count));
        const double scale = stddev > 1e-300 ? 1.0 / stddev : 0.0;
        for (std::size_t i = 0; i < count; ++i)
            values[i * dim + c] = (values[i * dim + c] - mean) * scale;
    }
}

/// Descriptors for every pixel of frame t, patches temporally centered at t.
/// PerPixel slides the cube over each pixel; Tiled computes one descriptor
/// per non-overlapping py*px tile and broadcasts it across the tile (a
/// documented approximation for throughput).
inline FeatureField feature_field(const FrameSequence& seq, int t, const FilterBank& bank,
                                  const PatchSpec& spec, const ChannelSet& channels,
                                  const FeatureFieldOptions& opts = {}) {
    if (t < 0 || t >= seq.size())
        throw std::invalid_argument("feature_field: frame index out of range");
    const int h = seq.height(), w = seq.width();
    FeatureField field;
    field.height = h;
    field.width = w;
    field.dim = static_cast<int>(channels.size());
    field.values.assign(static_cast<std::size_t>(h) * w * field.dim, 0.0);

    if (opts.stride == StrideMode::PerPixel) {
        parallel_for(static_cast<std::size_t>(h) * w, resolve_workers(opts.workers),
                     [&](std::size_t begin, std::size_t end) {
            for (std::size_t p = begin; p < end; ++p) {
                const int y = static_cast<int>(p) / w;
                const int x = static_cast<int>(p) % w;
                const Volume patch = extract_patch(seq, y, x, t, spec);
                const std::vector<double> f =
                    pixel_descriptor(patch, bank, spec, channels, opts.leader);
                std::copy(f.begin(), f.end(), field.values.begin() + p * field.dim);
            }
        });
    } else {
        const int tiles_y = (h + spec.py - 1) / spec.py;
        const int tiles_x = (w + spec.px - 1) / spec.px;
        parallel_for(static_cast<std::size_t>(tiles_y) * tiles_x,
                     resolve_workers(opts.workers),
                     [&](std::size_t begin, std::size_t end) {
            for (std::size_t tile = begin; tile < end; ++tile) {
                const int ty = static_cast<int>(tile) / tiles_x;
                const int tx = static_cast<int>(tile) % tiles_x;
                // anchor the patch on the tile itself (center of the tile cube)
                const int cy = ty * spec.py + spec.py / 2;
                const int cx = tx * spec.px + spec.px / 2;
                const Volume patch = extract_patch(seq, cy, cx, t, spec);
                const std::vector<double> f =
                    pixel_descriptor(patch, bank, spec, channels, opts.leader);
                for (int y = ty * spec.py; y < std::min(h, (ty + 1) * spec.py); ++y)
                    for (int x = tx * spec.px; x < std::min(w, (tx + 1) * spec.px); ++x)
                        std::copy(f.begin(), f.end(),
                                  field.values.begin() + field.pixel_offset(y, x));
            }
        });
    }

    if (opts.normalize)
        zscore_normalize(field.values, static_cast<std::size_t>(h) * w, field.dim);
    return field;
}

inline constexpr char kFeatureMagic[4] = {'W', 'M', 'F', 'F'};

/// Dumps a field as magic + u32 height/width/dim + row-major f64 values,
/// all little-endian.
inline void save_feature_field(const std::string& path, const FeatureField& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open file for writing");
    out.write(kFeatureMagic, 4);
    const std::uint32_t header[3] = {static_cast<std::uint32_t>(field.height),
                                     static_cast<std::uint32_t>(field.width),
                                     static_cast<std::uint32_t>(field.dim)};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    out.write(reinterpret_cast<const char*>(field.values.data()),
              static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!out) throw IoError(path + ": write failed");
}

inline FeatureField load_feature_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open file");
    char magic[4];
    std::uint32_t header[3];
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in || std::memcmp(magic, kFeatureMagic, 4) != 0)
        throw IoError(path + ": not a feature-field file");
    FeatureField field;
    field.height = static_cast<int>(header[0]);
    field.width = static_cast<int>(header[1]);
    field.dim = static_cast<int>(header[2]);
    field.values.resize(static_cast<std::size_t>(field.height) * field.width * field.dim);
    in.read(reinterpret_cast<char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!in) throw IoError(path + ": truncated feature data");
    return field;
}

}  // namespace wavemotion
