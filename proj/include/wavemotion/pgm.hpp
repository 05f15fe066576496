#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "wavemotion/types.hpp"

namespace wavemotion {

/// Raw decoded PNM payload: P5 (grayscale) or P6 (RGB), 8-bit only.
struct PnmImage {
    int magic = 5;  // 5 or 6
    int width = 0;
    int height = 0;
    int maxval = 255;
    std::vector<std::uint8_t> bytes;  // w*h (P5) or w*h*3 (P6)
};

namespace detail {

inline int pnm_read_token(std::istream& in, const std::string& path) {
    // skip whitespace and '#' comments
    for (;;) {
        int c = in.peek();
        if (c == EOF) throw IoError(path + ": truncated PNM header");
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        break;
    }
    int value = 0;
    if (!(in >> value)) throw IoError(path + ": malformed PNM header");
    return value;
}

}  // namespace detail

inline PnmImage read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open file");
    char p = 0, n = 0;
    in.get(p).get(n);
    if (p != 'P' || (n != '5' && n != '6'))
        throw IoError(path + ": not a binary PGM/PPM (P5/P6) file");
    PnmImage img;
    img.magic = n - '0';
    img.width = detail::pnm_read_token(in, path);
    img.height = detail::pnm_read_token(in, path);
    img.maxval = detail::pnm_read_token(in, path);
    if (img.width <= 0 || img.height <= 0)
        throw IoError(path + ": non-positive image dimensions");
    if (img.maxval <= 0 || img.maxval > 255)
        throw IoError(path + ": only 8-bit PNM supported (maxval 1..255)");
    in.get();  // single whitespace byte after maxval
    const std::size_t count =
        static_cast<std::size_t>(img.width) * img.height * (img.magic == 6 ? 3 : 1);
    img.bytes.resize(count);
    in.read(reinterpret_cast<char*>(img.bytes.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count)
        throw IoError(path + ": truncated pixel data");
    return img;
}

inline void write_pgm(const std::string& path, int height, int width,
                      const std::uint8_t* bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open file for writing");
    out << "P5\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes),
              static_cast<std::streamsize>(static_cast<std::size_t>(height) * width));
    if (!out) throw IoError(path + ": write failed");
}

/// Decodes one image file as an intensity frame. P6 is reduced to luma
/// with the 0.299/0.587/0.114 weights; 8-bit values are divided by 255.
inline Frame load_frame(const std::string& path) {
    PnmImage img = read_pnm(path);
    Frame f;
    f.height = img.height;
    f.width = img.width;
    f.data.resize(static_cast<std::size_t>(img.height) * img.width);
    const std::size_t n = f.data.size();
    if (img.magic == 5) {
        for (std::size_t i = 0; i < n; ++i) f.data[i] = img.bytes[i] / 255.0;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double r = img.bytes[3 * i + 0];
            const double g = img.bytes[3 * i + 1];
            const double b = img.bytes[3 * i + 2];
            f.data[i] = (0.299 * r + 0.587 * g + 0.114 * b) / 255.0;
        }
    }
    return f;
}

inline void save_frame(const std::string& path, const Frame& frame) {
    std::vector<std::uint8_t> bytes(frame.data.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        double v = std::clamp(frame.data[i], 0.0, 1.0);
        bytes[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
    write_pgm(path, frame.height, frame.width, bytes.data());
}

/// A printf-style filename pattern with exactly one integer field,
/// e.g. "in%06d.pgm". Used both to format output names and to match and
/// parse input names.
class FilePattern {
public:
    explicit FilePattern(std::string pattern) : pattern_(std::move(pattern)) {
        const auto pos = pattern_.find('%');
        if (pos == std::string::npos)
            throw ConfigError("pattern '" + pattern_ + "' has no % field");
        std::size_t i = pos + 1;
        while (i < pattern_.size() && std::isdigit(static_cast<unsigned char>(pattern_[i]))) ++i;
        if (i >= pattern_.size() || pattern_[i] != 'd')
            throw ConfigError("pattern '" + pattern_ + "' must use a single %d or %0Nd field");
        if (pattern_.find('%', i) != std::string::npos)
            throw ConfigError("pattern '" + pattern_ + "' has more than one % field");
        prefix_ = pattern_.substr(0, pos);
        suffix_ = pattern_.substr(i + 1);
    }

    std::string format(int index) const {
        char buf[512];
        std::snprintf(buf, sizeof(buf), pattern_.c_str(), index);
        return buf;
    }

    /// Returns the embedded index if `name` matches the pattern.
    std::optional<int> parse(const std::string& name) const {
        if (name.size() < prefix_.size() + suffix_.size() + 1) return std::nullopt;
        if (name.compare(0, prefix_.size(), prefix_) != 0) return std::nullopt;
        if (name.compare(name.size() - suffix_.size(), suffix_.size(), suffix_) != 0)
            return std::nullopt;
        const std::string digits =
            name.substr(prefix_.size(), name.size() - prefix_.size() - suffix_.size());
        if (digits.empty()) return std::nullopt;
        for (char c : digits)
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        try {
            return std::stoi(digits);
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }

    const std::string& str() const { return pattern_; }

private:
    std::string pattern_;
    std::string prefix_;
    std::string suffix_;
};

/// Lists the files in `directory` matching `pattern`, sorted by embedded
/// index. Rejects duplicate indices.
inline std::vector<std::pair<int, std::string>> list_sequence_files(
    const std::string& directory, const std::string& pattern) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(directory))
        throw IoError(directory + ": not a directory");
    const FilePattern pat(pattern);
    std::vector<std::pair<int, std::string>> hits;
    for (const auto& entry : fs::directory_iterator(directory)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (auto idx = pat.parse(name)) hits.emplace_back(*idx, entry.path().string());
    }
    if (hits.empty())
        throw IoError(directory + ": no files matching pattern '" + pattern + "'");
    std::sort(hits.begin(), hits.end());
    for (std::size_t i = 1; i < hits.size(); ++i)
        if (hits[i].first == hits[i - 1].first)
            throw IoError(hits[i].second + ": duplicate frame index");
    return hits;
}

/// Loads a slice [first, last) of a listed sequence. All frames must share
/// one size; `expect_h`/`expect_w` extend the check across slices.
inline FrameSequence load_sequence_slice(
    const std::vector<std::pair<int, std::string>>& files, std::size_t first,
    std::size_t last, int expect_h = 0, int expect_w = 0) {
    FrameSequence seq;
    seq.frames.reserve(last - first);
    seq.indices.reserve(last - first);
    for (std::size_t i = first; i < last; ++i) {
        const auto& [idx, path] = files[i];
        Frame f = load_frame(path);
        const int want_h = seq.frames.empty() ? expect_h : seq.height();
        const int want_w = seq.frames.empty() ? expect_w : seq.width();
        if (want_h > 0 && (f.height != want_h || f.width != want_w)) {
            throw IoError(path + ": frame size " + std::to_string(f.width) + "x" +
                          std::to_string(f.height) + " differs from first frame");
        }
        seq.frames.push_back(std::move(f));
        seq.indices.push_back(idx);
    }
    return seq;
}

/// Loads all frames in `directory` whose names match `pattern`, sorted by
/// the embedded index.
inline FrameSequence load_sequence(const std::string& directory, const std::string& pattern) {
    const auto files = list_sequence_files(directory, pattern);
    return load_sequence_slice(files, 0, files.size());
}

inline constexpr std::uint8_t kIgnoreMaskByte = 85;

/// Ground-truth coding: 255 = motion, 0 = static, anything else = ignore.
inline GroundTruthMask load_mask(const std::string& path) {
    PnmImage img = read_pnm(path);
    if (img.magic != 5) throw IoError(path + ": ground-truth mask must be P5 grayscale");
    GroundTruthMask m;
    m.height = img.height;
    m.width = img.width;
    m.labels.resize(img.bytes.size());
    for (std::size_t i = 0; i < img.bytes.size(); ++i) {
        const std::uint8_t v = img.bytes[i];
        m.labels[i] = v == 255 ? TruthLabel::Motion
                    : v == 0   ? TruthLabel::Static
                               : TruthLabel::Ignore;
    }
    return m;
}

inline void save_mask(const std::string& path, const GroundTruthMask& mask) {
    std::vector<std::uint8_t> bytes(mask.labels.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        switch (mask.labels[i]) {
            case TruthLabel::Motion: bytes[i] = 255; break;
            case TruthLabel::Static: bytes[i] = 0; break;
            case TruthLabel::Ignore: bytes[i] = kIgnoreMaskByte; break;
        }
    }
    write_pgm(path, mask.height, mask.width, bytes.data());
}

inline void save_segmentation(const std::string& path, const SegmentationMask& mask) {
    std::vector<std::uint8_t> bytes(mask.motion.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = mask.motion[i] ? 255 : 0;
    write_pgm(path, mask.height, mask.width, bytes.data());
}

/// Reads a predicted segmentation mask; any value >= 128 counts as motion.
inline SegmentationMask load_segmentation(const std::string& path) {
    PnmImage img = read_pnm(path);
    if (img.magic != 5) throw IoError(path + ": segmentation mask must be P5 grayscale");
    SegmentationMask m;
    m.height = img.height;
    m.width = img.width;
    m.motion.resize(img.bytes.size());
    for (std::size_t i = 0; i < img.bytes.size(); ++i) m.motion[i] = img.bytes[i] >= 128 ? 1 : 0;
    return m;
}

}  // namespace wavemotion
