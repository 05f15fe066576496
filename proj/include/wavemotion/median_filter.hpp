#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "wavemotion/parallel.hpp"
#include "wavemotion/types.hpp"

namespace wavemotion {

/// Spatiotemporal median deinterlacing: each output pixel is the median of
/// its (2r+1)^3 neighborhood, with reflection padding at frame borders and
/// at both ends of the sequence. Frames keep their size.
inline FrameSequence deinterlace(const FrameSequence& seq, int radius, int workers = 0) {
    if (radius < 1) throw std::invalid_argument("deinterlace: radius must be >= 1");
    if (seq.frames.empty()) throw std::invalid_argument("deinterlace: empty sequence");
    const int h = seq.height();
    const int w = seq.width();
    const int n = seq.size();
    const int side = 2 * radius + 1;
    const std::size_t window = static_cast<std::size_t>(side) * side * side;

    FrameSequence out;
    out.indices = seq.indices;
    out.frames.assign(seq.frames.size(), Frame::filled(h, w, 0.0));

    parallel_for(static_cast<std::size_t>(n), resolve_workers(workers),
                 [&](std::size_t begin, std::size_t end) {
        std::vector<double> buf(window);
        for (std::size_t t = begin; t < end; ++t) {
            Frame& dst = out.frames[t];
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    std::size_t k = 0;
                    for (int dt = -radius; dt <= radius; ++dt) {
                        const Frame& src =
                            seq.frames[reflect_index(static_cast<int>(t) + dt, n)];
                        for (int dy = -radius; dy <= radius; ++dy) {
                            const int yy = reflect_index(y + dy, h);
                            for (int dx = -radius; dx <= radius; ++dx) {
                                buf[k++] = src.at(yy, reflect_index(x + dx, w));
                            }
                        }
                    }
                    auto mid = buf.begin() + static_cast<std::ptrdiff_t>(window / 2);
                    std::nth_element(buf.begin(), mid, buf.end());
                    dst.at(y, x) = *mid;
                }
            }
        }
    });
    return out;
}

}  // namespace wavemotion
