#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavemotion {

/// Error raised for malformed configuration (bad keys, bad values, bad
/// filter taps). The CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Error raised for file-system and decode failures. Exit code 3.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Error raised when the data cannot support the requested computation
/// (e.g. fewer distinct points than clusters). Exit code 4.
struct DegenerateDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One grayscale frame, intensities in [0, 1], row-major.
struct Frame {
    int height = 0;
    int width = 0;
    std::vector<double> data;

    double at(int y, int x) const { return data[static_cast<std::size_t>(y) * width + x]; }
    double& at(int y, int x) { return data[static_cast<std::size_t>(y) * width + x]; }

    static Frame filled(int height, int width, double value) {
        Frame f;
        f.height = height;
        f.width = width;
        f.data.assign(static_cast<std::size_t>(height) * width, value);
        return f;
    }
};

/// An ordered list of equally sized frames. `indices` keeps each frame's
/// source index (the integer embedded in its filename) so masks and truth
/// lookups stay aligned with the on-disk numbering.
struct FrameSequence {
    std::vector<Frame> frames;
    std::vector<int> indices;

    int height() const { return frames.empty() ? 0 : frames.front().height; }
    int width() const { return frames.empty() ? 0 : frames.front().width; }
    int size() const { return static_cast<int>(frames.size()); }
};

enum class TruthLabel : std::uint8_t { Static = 0, Motion = 1, Ignore = 2 };

/// Per-pixel ground-truth labels; `Ignore` pixels are excluded from scoring.
struct GroundTruthMask {
    int height = 0;
    int width = 0;
    std::vector<TruthLabel> labels;

    TruthLabel at(int y, int x) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

/// Binary segmentation output: true = motion, false = static.
struct SegmentationMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> motion;  // 0 or 1

    bool at(int y, int x) const { return motion[static_cast<std::size_t>(y) * width + x] != 0; }
};

/// A 3D block of reals indexed (y, x, t), frame-major layout.
struct Volume {
    int ny = 0;
    int nx = 0;
    int nt = 0;
    std::vector<double> data;

    Volume() = default;
    Volume(int ny_, int nx_, int nt_)
        : ny(ny_), nx(nx_), nt(nt_),
          data(static_cast<std::size_t>(ny_) * nx_ * nt_, 0.0) {}

    std::size_t index(int y, int x, int t) const {
        return (static_cast<std::size_t>(t) * ny + y) * nx + x;
    }
    double at(int y, int x, int t) const { return data[index(y, x, t)]; }
    double& at(int y, int x, int t) { return data[index(y, x, t)]; }
    std::size_t cells() const { return data.size(); }
};

/// Reflects an out-of-range index into [0, n) by mirroring at both ends
/// (…, 1, 0 | 0, 1, …, n-1 | n-1, n-2, …). Works for any overhang depth.
inline int reflect_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n;
    int m = i % period;
    if (m < 0) m += period;
    return m < n ? m : period - 1 - m;
}

}  // namespace wavemotion
