#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "wavemotion/descriptor.hpp"
#include "wavemotion/filter_bank.hpp"
#include "wavemotion/types.hpp"

namespace wavemotion {

/// Everything the detect pipeline needs. Defaults mirror the reference
/// operating point: 4x4x4 patches, two scales, channels LLH/LHL/HLH/Leader,
/// Haar bank. Normalization defaults to off: the channels already share
/// units (coefficient norms of one signal), and per-channel z-scoring
/// inflates sparsely active channels until the two-way split isolates
/// edge outliers instead of motion.
struct DetectorConfig {
    std::string frames_dir;
    std::string frame_pattern = "in%06d.pgm";
    std::string truth_dir;
    std::string truth_pattern = "gt%06d.pgm";
    std::string out_dir;
    std::string mask_pattern = "mask%06d.pgm";
    std::string metrics_name = "metrics.csv";

    PatchSpec patch{4, 4, 4, 0};
    std::string filter = "haar";
    std::vector<double> filter_low;   // custom taps; empty = built-in
    std::vector<double> filter_high;  // optional, else QMF of filter_low
    ChannelSet channels = default_channels();
    bool normalize = false;
    bool restricted_leader = false;
    bool leader_same_scale = false;

    bool deinterlace = false;
    int deinterlace_radius = 1;
    StrideMode stride = StrideMode::PerPixel;

    std::uint64_t seed = 42;
    double kmeans_tol = 1e-6;
    int kmeans_max_iters = 100;
    int cluster_chunk = 0;  // frames clustered jointly; 0 = whole sequence

    int workers = 0;  // 0 = hardware concurrency
    int chunk_frames = 0;  // feature-extraction window; 0 = whole sequence
    double degenerate_floor = 1e-9;
    bool dump_features = false;
    std::string features_pattern = "features%06d.bin";
};

namespace detail_config {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "off" || value == "no") return false;
    throw ConfigError(key + ": expected a boolean, got '" + value + "'");
}

inline int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    }
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

}  // namespace detail_config

/// Parses "PYxPXxPT", e.g. "4x4x4".
inline PatchSpec parse_patch(const std::string& text, int scales = 0) {
    const auto parts = detail_config::split(text, 'x');
    if (parts.size() != 3)
        throw ConfigError("patch '" + text + "': expected HxWxT, e.g. 4x4x4");
    PatchSpec spec;
    spec.py = detail_config::parse_int("patch", parts[0]);
    spec.px = detail_config::parse_int("patch", parts[1]);
    spec.pt = detail_config::parse_int("patch", parts[2]);
    spec.scales = scales;
    validate_patch_spec(spec);
    return spec;
}

/// Parses a comma-separated channel list, e.g. "LLH,LHL,HLH,Leader".
inline ChannelSet parse_channels(const std::string& text) {
    ChannelSet out;
    for (const std::string& name : detail_config::split(text, ',')) {
        auto c = parse_channel(name);
        if (!c) throw ConfigError("unknown channel '" + name + "'");
        out.push_back(*c);
    }
    validate_channels(out);
    return out;
}

inline std::vector<double> parse_taps(const std::string& key, const std::string& text) {
    std::vector<double> out;
    for (const std::string& item : detail_config::split(text, ','))
        out.push_back(detail_config::parse_double(key, item));
    return out;
}

/// Applies one key = value assignment; unknown keys are an error.
inline void apply_config_entry(DetectorConfig& cfg, const std::string& key,
                               const std::string& value) {
    using namespace detail_config;
    if (key == "frames_dir") cfg.frames_dir = value;
    else if (key == "frame_pattern") cfg.frame_pattern = value;
    else if (key == "truth_dir") cfg.truth_dir = value;
    else if (key == "truth_pattern") cfg.truth_pattern = value;
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "mask_pattern") cfg.mask_pattern = value;
    else if (key == "metrics_name") cfg.metrics_name = value;
    else if (key == "patch") cfg.patch = parse_patch(value, cfg.patch.scales);
    else if (key == "scales") cfg.patch.scales = parse_int(key, value);
    else if (key == "filter") cfg.filter = value;
    else if (key == "filter_low") cfg.filter_low = parse_taps(key, value);
    else if (key == "filter_high") cfg.filter_high = parse_taps(key, value);
    else if (key == "channels") cfg.channels = parse_channels(value);
    else if (key == "normalize") cfg.normalize = parse_bool(key, value);
    else if (key == "restricted_leader") cfg.restricted_leader = parse_bool(key, value);
    else if (key == "leader_same_scale") cfg.leader_same_scale = parse_bool(key, value);
    else if (key == "deinterlace") cfg.deinterlace = parse_bool(key, value);
    else if (key == "deinterlace_radius") cfg.deinterlace_radius = parse_int(key, value);
    else if (key == "stride_mode") {
        if (value == "per_pixel") cfg.stride = StrideMode::PerPixel;
        else if (value == "tiled") cfg.stride = StrideMode::Tiled;
        else throw ConfigError("stride_mode: expected per_pixel or tiled, got '" + value + "'");
    }
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "kmeans_tol") cfg.kmeans_tol = parse_double(key, value);
    else if (key == "kmeans_max_iters") cfg.kmeans_max_iters = parse_int(key, value);
    else if (key == "cluster_chunk") cfg.cluster_chunk = parse_int(key, value);
    else if (key == "workers") cfg.workers = parse_int(key, value);
    else if (key == "chunk_frames") cfg.chunk_frames = parse_int(key, value);
    else if (key == "degenerate_floor") cfg.degenerate_floor = parse_double(key, value);
    else if (key == "dump_features") cfg.dump_features = parse_bool(key, value);
    else if (key == "features_pattern") cfg.features_pattern = value;
    else throw ConfigError("unknown config key '" + key + "'");
}

/// Flat key = value file; '#' starts a comment, blank lines are skipped.
inline void load_config_file(DetectorConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail_config::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = detail_config::trim(line.substr(0, eq));
        const std::string value = detail_config::trim(line.substr(eq + 1));
        try {
            apply_config_entry(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

inline FilterBank resolve_filter_bank(const DetectorConfig& cfg) {
    return make_filter_bank(cfg.filter, cfg.filter_low, cfg.filter_high);
}

inline LeaderOptions resolve_leader_options(const DetectorConfig& cfg) {
    LeaderOptions opts = cfg.restricted_leader ? restricted_leader_options() : LeaderOptions{};
    opts.same_scale_only = cfg.leader_same_scale;
    return opts;
}

}  // namespace wavemotion
