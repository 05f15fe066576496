#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wavemotion/pgm.hpp"
#include "wavemotion/types.hpp"

namespace wavemotion {

enum class SceneKind { MovingSquare, DriftingSineTexture, BlinkingRegion, StaticNoise };

inline std::optional<SceneKind> parse_scene_kind(const std::string& s) {
    if (s == "moving-square") return SceneKind::MovingSquare;
    if (s == "drifting-sine-texture") return SceneKind::DriftingSineTexture;
    if (s == "blinking-region") return SceneKind::BlinkingRegion;
    if (s == "static-noise") return SceneKind::StaticNoise;
    return std::nullopt;
}

inline const char* scene_kind_name(SceneKind k) {
    switch (k) {
        case SceneKind::MovingSquare: return "moving-square";
        case SceneKind::DriftingSineTexture: return "drifting-sine-texture";
        case SceneKind::BlinkingRegion: return "blinking-region";
        case SceneKind::StaticNoise: return "static-noise";
    }
    return "?";
}

/// Deterministic desk-scale scene description. `size` is the object edge
/// length in pixels, `speed` the drift in pixels per frame.
struct SyntheticSpec {
    SceneKind kind = SceneKind::MovingSquare;
    int height = 64;
    int width = 64;
    int frames = 32;
    int size = 8;
    double speed = 1.0;
    double sigma = 0.0;
    std::uint64_t seed = 1;
    double foreground = 0.9;  // object intensity (moving-square)
    double background = 0.15;
    /// Width of the boundary band around the motion region coded as
    /// ignore, following the change-detection ground-truth convention of
    /// excluding object boundaries from scoring. 0 disables it.
    int boundary_unknown = 2;
};

struct SyntheticScene {
    FrameSequence frames;
    std::vector<GroundTruthMask> truths;
};

namespace detail_synth {

/// Box-Muller normal deviates on top of mt19937_64, so the noise stream is
/// identical across standard libraries.
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : rng_(seed) {}

    double next(double sigma) {
        if (sigma <= 0.0) return 0.0;
        if (have_spare_) {
            have_spare_ = false;
            return spare_ * sigma;
        }
        double u1 = 0.0;
        do {
            u1 = unit();
        } while (u1 <= 0.0);
        const double u2 = unit();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double two_pi = 6.283185307179586476925286766559;
        spare_ = mag * std::sin(two_pi * u2);
        have_spare_ = true;
        return mag * std::cos(two_pi * u2) * sigma;
    }

private:
    double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

struct Rect {
    int y0, x0, y1, x1;  // half-open
    bool contains(int y, int x) const { return y >= y0 && y < y1 && x >= x0 && x < x1; }
};

}  // namespace detail_synth

/// Square position at frame t for the moving-square scene: the top-left
/// corner starts at (centered, 2) and drifts right by `speed` px/frame.
inline detail_synth::Rect moving_square_rect(const SyntheticSpec& spec, int t) {
    const int y0 = (spec.height - spec.size) / 2;
    const int x0 = 2 + static_cast<int>(std::lround(spec.speed * t));
    return {y0, x0, y0 + spec.size, x0 + spec.size};
}

/// Centered region used by the blinking and texture scenes.
inline detail_synth::Rect centered_region(const SyntheticSpec& spec) {
    const int y0 = (spec.height - spec.size) / 2;
    const int x0 = (spec.width - spec.size) / 2;
    return {y0, x0, y0 + spec.size, x0 + spec.size};
}

namespace detail_synth {

/// Marks static pixels within `width` (Chebyshev distance) of any motion
/// pixel as ignore: the standard change-detection convention of leaving
/// object boundaries out of the scoring.
inline void mark_boundary_unknown(GroundTruthMask& truth, int width) {
    if (width <= 0) return;
    const std::vector<TruthLabel> original = truth.labels;
    auto motion_at = [&](int y, int x) {
        if (y < 0 || y >= truth.height || x < 0 || x >= truth.width) return false;
        return original[static_cast<std::size_t>(y) * truth.width + x] == TruthLabel::Motion;
    };
    for (int y = 0; y < truth.height; ++y) {
        for (int x = 0; x < truth.width; ++x) {
            auto& label = truth.labels[static_cast<std::size_t>(y) * truth.width + x];
            if (label != TruthLabel::Static) continue;
            bool near_motion = false;
            for (int dy = -width; dy <= width && !near_motion; ++dy)
                for (int dx = -width; dx <= width; ++dx)
                    if (motion_at(y + dy, x + dx)) {
                        near_motion = true;
                        break;
                    }
            if (near_motion) label = TruthLabel::Ignore;
        }
    }
}

}  // namespace detail_synth

inline SyntheticScene generate_synthetic(const SyntheticSpec& spec) {
    if (spec.height < 1 || spec.width < 1 || spec.frames < 1 || spec.size < 1)
        throw std::invalid_argument("generate_synthetic: extents must be positive");
    SyntheticScene scene;
    detail_synth::NormalSource noise(spec.seed);
    const double background = spec.background;

    for (int t = 0; t < spec.frames; ++t) {
        Frame frame = Frame::filled(spec.height, spec.width, background);
        GroundTruthMask truth;
        truth.height = spec.height;
        truth.width = spec.width;
        truth.labels.assign(static_cast<std::size_t>(spec.height) * spec.width,
                            TruthLabel::Static);

        switch (spec.kind) {
            case SceneKind::MovingSquare: {
                const auto rect = moving_square_rect(spec, t);
                for (int y = 0; y < spec.height; ++y) {
                    for (int x = 0; x < spec.width; ++x) {
                        if (rect.contains(y, x)) {
                            frame.at(y, x) = spec.foreground;
                            truth.labels[static_cast<std::size_t>(y) * spec.width + x] =
                                TruthLabel::Motion;
                        }
                    }
                }
                break;
            }
            case SceneKind::DriftingSineTexture: {
                // drifting grating: constant contrast across the region, so
                // every motion pixel carries temporal evidence
                const auto rect = centered_region(spec);
                const double wavelength = 8.0;
                const double two_pi = 6.283185307179586476925286766559;
                for (int y = 0; y < spec.height; ++y) {
                    for (int x = 0; x < spec.width; ++x) {
                        if (!rect.contains(y, x)) continue;
                        const double phase =
                            two_pi * (x - spec.speed * t) / wavelength;
                        frame.at(y, x) = 0.5 + 0.35 * std::sin(phase);
                        truth.labels[static_cast<std::size_t>(y) * spec.width + x] =
                            TruthLabel::Motion;
                    }
                }
                break;
            }
            case SceneKind::BlinkingRegion: {
                const auto rect = centered_region(spec);
                const double level = (t % 2 == 0) ? 0.8 : 0.2;
                for (int y = rect.y0; y < rect.y1; ++y) {
                    for (int x = rect.x0; x < rect.x1; ++x) {
                        frame.at(y, x) = level;
                        truth.labels[static_cast<std::size_t>(y) * spec.width + x] =
                            TruthLabel::Motion;
                    }
                }
                break;
            }
            case SceneKind::StaticNoise: {
                // flat field; only the additive noise below
                for (auto& v : frame.data) v = 0.5;
                break;
            }
        }

        if (spec.kind != SceneKind::StaticNoise)
            detail_synth::mark_boundary_unknown(truth, spec.boundary_unknown);
        if (spec.sigma > 0.0) {
            for (auto& v : frame.data)
                v = std::clamp(v + noise.next(spec.sigma), 0.0, 1.0);
        }
        scene.frames.frames.push_back(std::move(frame));
        scene.frames.indices.push_back(t);
        scene.truths.push_back(std::move(truth));
    }
    return scene;
}

/// Writes the scene as numbered 8-bit PGM frames plus per-frame truth masks.
inline void write_synthetic(const SyntheticSpec& spec, const std::string& out_dir,
                            const std::string& frame_pattern = "in%06d.pgm",
                            const std::string& truth_pattern = "gt%06d.pgm") {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir))
        throw IoError(out_dir + ": cannot create output directory");
    const FilePattern fpat(frame_pattern);
    const FilePattern tpat(truth_pattern);
    const SyntheticScene scene = generate_synthetic(spec);
    for (int t = 0; t < spec.frames; ++t) {
        const std::string fpath = (fs::path(out_dir) / fpat.format(t)).string();
        save_frame(fpath, scene.frames.frames[static_cast<std::size_t>(t)]);
        const std::string tpath = (fs::path(out_dir) / tpat.format(t)).string();
        save_mask(tpath, scene.truths[static_cast<std::size_t>(t)]);
    }
}

}  // namespace wavemotion
