#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "wavemotion/median_filter.hpp"

using namespace wavemotion;

namespace {

FrameSequence constant_sequence(int h, int w, int n, double value) {
    FrameSequence seq;
    for (int t = 0; t < n; ++t) {
        seq.frames.push_back(Frame::filled(h, w, value));
        seq.indices.push_back(t);
    }
    return seq;
}

}  // namespace

TEST_CASE("median of a constant sequence is the identity") {
    const FrameSequence seq = constant_sequence(5, 5, 4, 0.5);
    const FrameSequence out = deinterlace(seq, 1);
    REQUIRE(out.size() == 4);
    for (const Frame& f : out.frames)
        for (double v : f.data) CHECK(v == 0.5);
    // idempotence
    const FrameSequence again = deinterlace(out, 1);
    for (int t = 0; t < 4; ++t) CHECK(again.frames[t].data == out.frames[t].data);
}

TEST_CASE("median removes an isolated impulse") {
    FrameSequence seq = constant_sequence(5, 5, 5, 0.0);
    seq.frames[2].at(2, 2) = 1.0;
    const FrameSequence out = deinterlace(seq, 1);
    CHECK(out.frames[2].at(2, 2) == 0.0);
}

TEST_CASE("median of 0..26 block is the 13th order statistic") {
    // 3x3x3 sequence holding 0/26 .. 26/26; oracle = sort 27 values, index 13
    FrameSequence seq;
    int v = 0;
    for (int t = 0; t < 3; ++t) {
        Frame f = Frame::filled(3, 3, 0.0);
        for (int y = 0; y < 3; ++y)
            for (int x = 0; x < 3; ++x) f.at(y, x) = v++ / 26.0;
        seq.frames.push_back(std::move(f));
        seq.indices.push_back(t);
    }
    std::vector<double> sorted;
    for (const Frame& f : seq.frames) sorted.insert(sorted.end(), f.data.begin(), f.data.end());
    std::sort(sorted.begin(), sorted.end());
    const double expected = sorted[13];
    CHECK(expected == 13.0 / 26.0);
    const FrameSequence out = deinterlace(seq, 1);
    CHECK(out.frames[1].at(1, 1) == expected);
}

TEST_CASE("median output range stays inside the input range") {
    std::mt19937_64 rng(99);
    FrameSequence seq;
    double lo = 1.0, hi = 0.0;
    for (int t = 0; t < 6; ++t) {
        Frame f = Frame::filled(7, 9, 0.0);
        for (auto& v : f.data) {
            v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        seq.frames.push_back(std::move(f));
        seq.indices.push_back(t);
    }
    const FrameSequence out = deinterlace(seq, 2);
    for (const Frame& f : out.frames)
        for (double v : f.data) {
            CHECK(v >= lo);
            CHECK(v <= hi);
        }
}

TEST_CASE("median is invariant to the worker count") {
    std::mt19937_64 rng(123);
    FrameSequence seq;
    for (int t = 0; t < 8; ++t) {
        Frame f = Frame::filled(11, 13, 0.0);
        for (auto& v : f.data) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        seq.frames.push_back(std::move(f));
        seq.indices.push_back(t);
    }
    const FrameSequence a = deinterlace(seq, 1, 1);
    const FrameSequence b = deinterlace(seq, 1, 4);
    for (int t = 0; t < 8; ++t) CHECK(a.frames[t].data == b.frames[t].data);
}

TEST_CASE("median rejects bad arguments") {
    const FrameSequence seq = constant_sequence(3, 3, 2, 0.1);
    CHECK_THROWS_AS(deinterlace(seq, 0), std::invalid_argument);
    CHECK_THROWS_AS(deinterlace(FrameSequence{}, 1), std::invalid_argument);
}
