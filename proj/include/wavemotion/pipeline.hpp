#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "wavemotion/config.hpp"
#include "wavemotion/descriptor.hpp"
#include "wavemotion/kmeans.hpp"
#include "wavemotion/median_filter.hpp"
#include "wavemotion/metrics.hpp"
#include "wavemotion/pgm.hpp"
#include "wavemotion/types.hpp"

namespace wavemotion {

struct DetectResult {
    std::vector<SegmentationMask> masks;
    std::vector<int> frame_indices;
    bool has_metrics = false;
    MetricReport metrics;
    /// True when clustering was skipped or failed for lack of signal and
    /// all-static masks were emitted instead (CLI exit code 4).
    bool degenerate = false;
    double seconds = 0.0;  // feature extraction + clustering + labelling
};

namespace detail_pipeline {

inline bool channel_high_t(Channel c) {
    return c != Channel::Leader && subband_high_t(static_cast<Subband>(c));
}

/// True when no point shows temporal-change evidence above the floor:
/// nothing moves, so clustering would only split noise or static texture.
/// The check runs over the temporal high-pass channels (H on the t axis);
/// if the channel set carries none, every non-LLL channel is used instead.
inline bool below_degenerate_floor(const std::vector<double>& raw, std::size_t n, int dim,
                                   const ChannelSet& channels, double floor) {
    std::vector<int> checked;
    for (int c = 0; c < dim; ++c)
        if (channel_high_t(channels[static_cast<std::size_t>(c)])) checked.push_back(c);
    if (checked.empty())
        for (int c = 0; c < dim; ++c)
            if (channels[static_cast<std::size_t>(c)] != Channel::LLL) checked.push_back(c);
    for (std::size_t i = 0; i < n; ++i)
        for (int c : checked)
            if (raw[i * dim + c] > floor) return false;
    return true;
}

inline std::vector<double> cluster_means(const std::vector<double>& raw, std::size_t n,
                                         int dim, const std::vector<int>& assignments,
                                         int k) {
    std::vector<double> means(static_cast<std::size_t>(k) * dim, 0.0);
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
        const int a = assignments[i];
        for (int c = 0; c < dim; ++c)
            means[static_cast<std::size_t>(a) * dim + c] += raw[i * dim + c];
        ++counts[static_cast<std::size_t>(a)];
    }
    for (int cl = 0; cl < k; ++cl) {
        if (counts[static_cast<std::size_t>(cl)] == 0) continue;
        const double inv = 1.0 / static_cast<double>(counts[static_cast<std::size_t>(cl)]);
        for (int c = 0; c < dim; ++c) means[static_cast<std::size_t>(cl) * dim + c] *= inv;
    }
    return means;
}

}  // namespace detail_pipeline

/// Clusters a window of per-pixel features and writes the per-frame masks
/// for that window. Returns true when the window was degenerate (no
/// temporal evidence, or too few distinct points) and all-static masks were
/// emitted.
inline bool detect_window_from_features(const std::vector<double>& raw, int count, int h,
                                        int w, const DetectorConfig& cfg,
                                        std::vector<SegmentationMask>& out_masks) {
    const std::size_t pixels = static_cast<std::size_t>(h) * w;
    const int dim = static_cast<int>(cfg.channels.size());
    const std::size_t n = pixels * static_cast<std::size_t>(count);
    bool degenerate = detail_pipeline::below_degenerate_floor(raw, n, dim, cfg.channels,
                                                              cfg.degenerate_floor);
    std::vector<int> assignments;
    int motion_cluster = -1;

    if (!degenerate) {
        std::vector<double> points = raw;
        if (cfg.normalize) zscore_normalize(points, n, dim);
        KMeansParams params;
        params.k = 2;
        params.seed = cfg.seed;
        params.max_iters = cfg.kmeans_max_iters;
        params.tol = cfg.kmeans_tol;
        params.workers = cfg.workers;
        try {
            KMeansResult km = kmeans(points, n, dim, params);
            assignments = std::move(km.assignments);
            const std::vector<double> raw_centroids =
                detail_pipeline::cluster_means(raw, n, dim, assignments, 2);
            std::vector<std::size_t> sizes(2, 0);
            for (int a : assignments) ++sizes[static_cast<std::size_t>(a)];
            motion_cluster = motion_cluster_index(raw_centroids, dim, cfg.channels, sizes);
        } catch (const DegenerateDataError&) {
            degenerate = true;
        }
    }

    for (int t = 0; t < count; ++t) {
        SegmentationMask mask;
        mask.height = h;
        mask.width = w;
        mask.motion.assign(pixels, 0);
        if (!degenerate) {
            const std::size_t off = static_cast<std::size_t>(t) * pixels;
            for (std::size_t p = 0; p < pixels; ++p)
                mask.motion[p] = assignments[off + p] == motion_cluster ? 1 : 0;
        }
        out_masks.push_back(std::move(mask));
    }
    return degenerate;
}

/// Clustering over the full feature matrix, one window of `cluster_chunk`
/// frames at a time (whole sequence by default) so cluster identity is
/// stable across frames; the optional z-score runs over the same window.
inline DetectResult detect_from_features(const std::vector<double>& raw, int frames, int h,
                                         int w, const DetectorConfig& cfg) {
    const std::size_t pixels = static_cast<std::size_t>(h) * w;
    const int dim = static_cast<int>(cfg.channels.size());
    DetectResult result;
    const int window = cfg.cluster_chunk > 0 ? cfg.cluster_chunk : frames;
    for (int begin = 0; begin < frames; begin += window) {
        const int count = std::min(frames, begin + window) - begin;
        std::vector<double> slice(raw.begin() + static_cast<std::size_t>(begin) * pixels * dim,
                                  raw.begin() +
                                      static_cast<std::size_t>(begin + count) * pixels * dim);
        if (detect_window_from_features(slice, count, h, w, cfg, result.masks))
            result.degenerate = true;
    }
    return result;
}

/// Runs deinterlace -> per-frame descriptors -> joint clustering -> masks on
/// an in-memory sequence.
inline DetectResult detect_sequence(const FrameSequence& input, const DetectorConfig& cfg) {
    validate_patch_spec(cfg.patch);
    validate_channels(cfg.channels);
    const FilterBank bank = resolve_filter_bank(cfg);

    const auto t_start = std::chrono::steady_clock::now();
    const FrameSequence* seq = &input;
    FrameSequence deinterlaced;
    if (cfg.deinterlace) {
        deinterlaced = deinterlace(input, cfg.deinterlace_radius, cfg.workers);
        seq = &deinterlaced;
    }

    const int frames = seq->size();
    const int h = seq->height();
    const int w = seq->width();
    const std::size_t pixels = static_cast<std::size_t>(h) * w;
    const int dim = static_cast<int>(cfg.channels.size());

    FeatureFieldOptions fopts;
    fopts.normalize = false;  // normalization happens per clustering window
    fopts.stride = cfg.stride;
    fopts.leader = resolve_leader_options(cfg);
    fopts.workers = cfg.workers;

    std::vector<double> raw(pixels * static_cast<std::size_t>(frames) * dim);
    for (int t = 0; t < frames; ++t) {
        const FeatureField field =
            feature_field(*seq, t, bank, cfg.patch, cfg.channels, fopts);
        std::copy(field.values.begin(), field.values.end(),
                  raw.begin() + static_cast<std::size_t>(t) * pixels * dim);
    }

    DetectResult result = detect_from_features(raw, frames, h, w, cfg);
    result.frame_indices = seq->indices;
    const auto t_end = std::chrono::steady_clock::now();
    result.seconds = std::chrono::duration<double>(t_end - t_start).count();
    return result;
}

/// File-level pipeline: loads frames, detects, writes one mask per input
/// frame, and scores against ground truth when a truth directory is given.
/// With chunk_frames > 0, frames are loaded in overlapping temporal windows
/// (overlap = patch temporal extent, plus the median radius when
/// deinterlacing) so the frame working set stays bounded while results stay
/// identical to whole-sequence processing.
inline DetectResult run_detect(const DetectorConfig& cfg) {
    namespace fs = std::filesystem;
    if (cfg.frames_dir.empty()) throw ConfigError("frames_dir is required");
    if (cfg.out_dir.empty()) throw ConfigError("out_dir is required");
    validate_patch_spec(cfg.patch);
    validate_channels(cfg.channels);
    if (!fs::is_directory(cfg.frames_dir))
        throw IoError(cfg.frames_dir + ": not a directory");
    if (!cfg.truth_dir.empty() && !fs::is_directory(cfg.truth_dir))
        throw IoError(cfg.truth_dir + ": not a directory");
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (!fs::is_directory(cfg.out_dir))
        throw IoError(cfg.out_dir + ": cannot create output directory");

    const auto files = list_sequence_files(cfg.frames_dir, cfg.frame_pattern);
    const int frames = static_cast<int>(files.size());
    const FilterBank bank = resolve_filter_bank(cfg);

    FeatureFieldOptions fopts;
    fopts.stride = cfg.stride;
    fopts.leader = resolve_leader_options(cfg);
    fopts.workers = cfg.workers;

    const FilePattern feat_pat(cfg.features_pattern);
    const auto t_start = std::chrono::steady_clock::now();

    const int window = cfg.chunk_frames > 0 ? cfg.chunk_frames : frames;
    const int context = cfg.patch.pt + (cfg.deinterlace ? cfg.deinterlace_radius : 0);

    int h = 0, w = 0;
    std::vector<double> raw;
    std::vector<int> frame_indices(static_cast<std::size_t>(frames));
    for (int begin = 0; begin < frames; begin += window) {
        const int end = std::min(frames, begin + window);
        const int w0 = std::max(0, begin - context);
        const int w1 = std::min(frames, end + context);
        FrameSequence local = load_sequence_slice(files, static_cast<std::size_t>(w0),
                                                  static_cast<std::size_t>(w1), h, w);
        if (h == 0) {
            h = local.height();
            w = local.width();
            raw.resize(static_cast<std::size_t>(frames) * h * w * cfg.channels.size());
        }
        if (cfg.deinterlace) local = deinterlace(local, cfg.deinterlace_radius, cfg.workers);
        const std::size_t stride = static_cast<std::size_t>(h) * w * cfg.channels.size();
        for (int t = begin; t < end; ++t) {
            const FeatureField field =
                feature_field(local, t - w0, bank, cfg.patch, cfg.channels, fopts);
            std::copy(field.values.begin(), field.values.end(),
                      raw.begin() + static_cast<std::size_t>(t) * stride);
            frame_indices[static_cast<std::size_t>(t)] = files[static_cast<std::size_t>(t)].first;
            if (cfg.dump_features) {
                const std::string path =
                    (fs::path(cfg.out_dir) / feat_pat.format(frame_indices[static_cast<std::size_t>(t)]))
                        .string();
                save_feature_field(path, field);
            }
        }
    }

    DetectResult result = detect_from_features(raw, frames, h, w, cfg);
    result.frame_indices = std::move(frame_indices);
    const auto t_end = std::chrono::steady_clock::now();
    result.seconds = std::chrono::duration<double>(t_end - t_start).count();

    const FilePattern mask_pat(cfg.mask_pattern);
    for (std::size_t i = 0; i < result.masks.size(); ++i) {
        const std::string path =
            (fs::path(cfg.out_dir) / mask_pat.format(result.frame_indices[i])).string();
        save_segmentation(path, result.masks[i]);
    }

    if (!cfg.truth_dir.empty()) {
        const FilePattern truth_pat(cfg.truth_pattern);
        ConfusionCounts counts;
        for (std::size_t i = 0; i < result.masks.size(); ++i) {
            const std::string path =
                (fs::path(cfg.truth_dir) / truth_pat.format(result.frame_indices[i])).string();
            const GroundTruthMask truth = load_mask(path);
            counts = accumulate(result.masks[i], truth, counts);
        }
        result.metrics = report(counts);
        result.has_metrics = true;
        const std::string name = fs::path(cfg.frames_dir).filename().string();
        write_metrics_csv((fs::path(cfg.out_dir) / cfg.metrics_name).string(),
                          {{name.empty() ? "sequence" : name, result.metrics}});
    }
    return result;
}

/// The twelve reference patch schedules, in volume-friendly table order.
inline std::vector<PatchSpec> sweep_patch_specs() {
    return {
        {2, 2, 2, 0}, {2, 2, 4, 0}, {2, 2, 6, 0}, {2, 2, 8, 0},
        {4, 4, 2, 0}, {4, 4, 4, 0}, {4, 4, 6, 0}, {4, 4, 8, 0},
        {8, 8, 2, 0}, {8, 8, 4, 0}, {8, 8, 6, 0}, {8, 8, 8, 0},
    };
}

struct SweepRow {
    PatchSpec patch;
    int scales = 0;
    MetricReport metrics;
    double seconds = 0.0;
};

inline constexpr const char* kSweepCsvHeader =
    "patch,scales,Re,Sp,FPR,FNR,PWC,Precision,F-measure,seconds";

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = std::string(kSweepCsvHeader) + "\n";
    for (const auto& row : rows) {
        std::ostringstream os;
        const MetricReport& m = row.metrics;
        os << row.patch.str() << ',' << row.scales << std::fixed << std::setprecision(6)
           << ',' << m.re << ',' << m.sp << ',' << m.fpr << ',' << m.fnr << ',' << m.pwc
           << ',' << m.precision << ',' << m.f_measure << std::setprecision(3) << ','
           << row.seconds;
        out += os.str() + "\n";
    }
    return out;
}

/// Runs detect once per patch spec against one dataset and reports the
/// seven measures plus the processing wall-clock per spec.
inline std::vector<SweepRow> run_sweep(const DetectorConfig& base,
                                       const std::vector<PatchSpec>& specs) {
    if (specs.empty()) throw ConfigError("sweep: need at least one patch spec");
    if (base.truth_dir.empty()) throw ConfigError("sweep: truth_dir is required");
    namespace fs = std::filesystem;
    std::vector<SweepRow> rows;
    rows.reserve(specs.size());
    for (const PatchSpec& spec : specs) {
        DetectorConfig cfg = base;
        cfg.patch = spec;
        cfg.out_dir = (fs::path(base.out_dir) / ("patch_" + spec.str())).string();
        const DetectResult res = run_detect(cfg);
        SweepRow row;
        row.patch = spec;
        row.scales = spec.resolved_scales();
        row.metrics = res.metrics;
        row.seconds = res.seconds;
        rows.push_back(row);
    }
    return rows;
}

/// Scores precomputed masks against ground truth (the `score` verb).
inline MetricReport score_masks(const std::string& masks_dir, const std::string& mask_pattern,
                                const std::string& truth_dir,
                                const std::string& truth_pattern) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(masks_dir)) throw IoError(masks_dir + ": not a directory");
    if (!fs::is_directory(truth_dir)) throw IoError(truth_dir + ": not a directory");
    const FilePattern mpat(mask_pattern);
    const FilePattern tpat(truth_pattern);
    std::vector<std::pair<int, std::string>> hits;
    for (const auto& entry : fs::directory_iterator(masks_dir)) {
        if (!entry.is_regular_file()) continue;
        if (auto idx = mpat.parse(entry.path().filename().string()))
            hits.emplace_back(*idx, entry.path().string());
    }
    if (hits.empty())
        throw IoError(masks_dir + ": no masks matching pattern '" + mask_pattern + "'");
    std::sort(hits.begin(), hits.end());
    ConfusionCounts counts;
    for (const auto& [idx, path] : hits) {
        const SegmentationMask mask = load_segmentation(path);
        const GroundTruthMask truth =
            load_mask((fs::path(truth_dir) / tpat.format(idx)).string());
        counts = accumulate(mask, truth, counts);
    }
    return report(counts);
}

}  // namespace wavemotion
