// Command-line front end: detect / synth / sweep / score.
// Exit codes: 0 ok, 2 config error, 3 I/O error, 4 degenerate data.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wavemotion/wavemotion.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitDegenerate = 4;

struct CommonFlags {
    std::string config_path;
    std::string frames_dir;
    std::string truth_dir;
    std::string out_dir;
    std::string patch;
    int scales = -1;
    std::string channels;
    std::string filter;
    long long seed = -1;
    int workers = -1;
    bool deinterlace = false;
    bool tiled = false;
    bool dump_features = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--frames", flags.frames_dir, "Directory of numbered P5 PGM frames");
    cmd->add_option("--truth", flags.truth_dir, "Directory of ground-truth masks");
    cmd->add_option("--out", flags.out_dir, "Output directory");
    cmd->add_option("--config", flags.config_path, "Flat key = value config file");
    cmd->add_option("--patch", flags.patch, "Patch extents HxWxT (default 4x4x4)");
    cmd->add_option("--scales", flags.scales, "Decomposition scales (default: per patch)");
    cmd->add_option("--channels", flags.channels,
                    "Comma-separated channels (default LLH,LHL,HLH,Leader)");
    cmd->add_option("--filter", flags.filter, "Filter bank: haar, db2, coif1");
    cmd->add_option("--seed", flags.seed, "Clustering seed (default 42)");
    cmd->add_option("--workers", flags.workers, "Worker threads (default: all cores)");
    cmd->add_flag("--deinterlace", flags.deinterlace, "Spatiotemporal median prefilter");
    cmd->add_flag("--tiled", flags.tiled, "Tiled fast path (stride = patch extents)");
    cmd->add_flag("--dump-features", flags.dump_features, "Write per-frame feature dumps");
}

// config file first, then flags on top (flags win)
wavemotion::DetectorConfig build_config(const CommonFlags& flags) {
    wavemotion::DetectorConfig cfg;
    if (!flags.config_path.empty()) wavemotion::load_config_file(cfg, flags.config_path);
    if (!flags.frames_dir.empty()) cfg.frames_dir = flags.frames_dir;
    if (!flags.truth_dir.empty()) cfg.truth_dir = flags.truth_dir;
    if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
    if (!flags.patch.empty()) cfg.patch = wavemotion::parse_patch(flags.patch, cfg.patch.scales);
    if (flags.scales >= 0) cfg.patch.scales = flags.scales;
    if (!flags.channels.empty()) cfg.channels = wavemotion::parse_channels(flags.channels);
    if (!flags.filter.empty()) {
        cfg.filter = flags.filter;
        cfg.filter_low.clear();
        cfg.filter_high.clear();
    }
    if (flags.seed >= 0) cfg.seed = static_cast<std::uint64_t>(flags.seed);
    if (flags.workers >= 0) cfg.workers = flags.workers;
    if (flags.deinterlace) cfg.deinterlace = true;
    if (flags.tiled) cfg.stride = wavemotion::StrideMode::Tiled;
    if (flags.dump_features) cfg.dump_features = true;
    return cfg;
}

void print_metrics(const wavemotion::MetricReport& m) {
    std::printf("Re=%.6f Sp=%.6f FPR=%.6f FNR=%.6f PWC=%.4f Precision=%.6f F-measure=%.6f%s\n",
                m.re, m.sp, m.fpr, m.fnr, m.pwc, m.precision, m.f_measure,
                m.degenerate ? " (degenerate denominators reported as 0)" : "");
}

int cmd_detect(const CommonFlags& flags) {
    const wavemotion::DetectorConfig cfg = build_config(flags);
    const wavemotion::DetectResult result = wavemotion::run_detect(cfg);
    std::printf("wrote %zu masks to %s (%.3f s)\n", result.masks.size(),
                cfg.out_dir.c_str(), result.seconds);
    if (result.has_metrics) print_metrics(result.metrics);
    if (result.degenerate) {
        std::fprintf(stderr,
                     "warning: clustering input degenerate (no motion evidence); "
                     "all-static masks written\n");
        return kExitDegenerate;
    }
    return kExitOk;
}

int cmd_synth(const wavemotion::SyntheticSpec& spec, const std::string& out_dir) {
    wavemotion::write_synthetic(spec, out_dir);
    std::printf("wrote %d frames + truth masks to %s\n", spec.frames, out_dir.c_str());
    return kExitOk;
}

int cmd_sweep(const CommonFlags& flags, const std::string& patches_arg,
              const std::string& csv_path) {
    wavemotion::DetectorConfig base = build_config(flags);
    if (base.out_dir.empty()) throw wavemotion::ConfigError("out_dir is required");
    std::vector<wavemotion::PatchSpec> specs;
    if (patches_arg.empty()) {
        specs = wavemotion::sweep_patch_specs();
    } else {
        std::string item;
        std::istringstream is(patches_arg);
        while (std::getline(is, item, ','))
            specs.push_back(wavemotion::parse_patch(item));
    }
    const auto rows = wavemotion::run_sweep(base, specs);
    const std::string csv = wavemotion::sweep_csv(rows);
    const std::string path = csv_path.empty()
                                 ? (std::filesystem::path(base.out_dir) / "sweep.csv").string()
                                 : csv_path;
    std::ofstream out(path);
    if (!out) throw wavemotion::IoError(path + ": cannot open file for writing");
    out << csv;
    std::printf("%s", csv.c_str());
    std::printf("wrote %zu rows to %s\n", rows.size(), path.c_str());
    return kExitOk;
}

int cmd_score(const std::string& masks_dir, const std::string& mask_pattern,
              const std::string& truth_dir, const std::string& truth_pattern,
              const std::string& csv_path) {
    const wavemotion::MetricReport m =
        wavemotion::score_masks(masks_dir, mask_pattern, truth_dir, truth_pattern);
    print_metrics(m);
    if (!csv_path.empty()) {
        const std::string name = std::filesystem::path(masks_dir).filename().string();
        wavemotion::write_metrics_csv(csv_path, {{name.empty() ? "masks" : name, m}});
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Per-pixel motion segmentation from 3D wavelet descriptors"};
    app.require_subcommand(1);

    CommonFlags flags;

    auto* detect = app.add_subcommand("detect", "Segment a frame sequence into motion masks");
    add_common_flags(detect, flags);

    wavemotion::SyntheticSpec synth_spec;
    std::string synth_kind = "moving-square";
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic sequence + ground truth");
    synth->add_option("--kind", synth_kind,
                      "moving-square | drifting-sine-texture | blinking-region | static-noise");
    synth->add_option("--out", synth_out, "Output directory")->required();
    synth->add_option("--height", synth_spec.height, "Frame height");
    synth->add_option("--width", synth_spec.width, "Frame width");
    synth->add_option("--frames", synth_spec.frames, "Frame count");
    synth->add_option("--size", synth_spec.size, "Object edge length in pixels");
    synth->add_option("--speed", synth_spec.speed, "Drift in pixels per frame");
    synth->add_option("--sigma", synth_spec.sigma, "Additive Gaussian noise sigma");
    synth->add_option("--seed", synth_spec.seed, "Noise seed");
    synth->add_option("--foreground", synth_spec.foreground, "Object intensity");
    synth->add_option("--background", synth_spec.background, "Background intensity");
    synth->add_option("--boundary-unknown", synth_spec.boundary_unknown,
                      "Ignore-band width around motion regions in the truth");

    std::string sweep_patches;
    std::string sweep_csv_path;
    auto* sweep = app.add_subcommand("sweep", "Run the patch-size schedule and emit a CSV");
    add_common_flags(sweep, flags);
    sweep->add_option("--patches", sweep_patches,
                      "Comma-separated HxWxT list (default: the 12-spec schedule)");
    sweep->add_option("--csv", sweep_csv_path, "CSV path (default <out>/sweep.csv)");

    std::string score_masks_dir, score_csv;
    std::string score_mask_pattern = "mask%06d.pgm";
    std::string score_truth_dir;
    std::string score_truth_pattern = "gt%06d.pgm";
    auto* score = app.add_subcommand("score", "Score precomputed masks against ground truth");
    score->add_option("--masks", score_masks_dir, "Directory of predicted masks")->required();
    score->add_option("--mask-pattern", score_mask_pattern, "Mask filename pattern");
    score->add_option("--truth", score_truth_dir, "Directory of ground-truth masks")->required();
    score->add_option("--truth-pattern", score_truth_pattern, "Truth filename pattern");
    score->add_option("--csv", score_csv, "Also write a metrics CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (detect->parsed()) return cmd_detect(flags);
        if (synth->parsed()) {
            auto kind = wavemotion::parse_scene_kind(synth_kind);
            if (!kind) throw wavemotion::ConfigError("unknown scene kind '" + synth_kind + "'");
            synth_spec.kind = *kind;
            return cmd_synth(synth_spec, synth_out);
        }
        if (sweep->parsed()) return cmd_sweep(flags, sweep_patches, sweep_csv_path);
        if (score->parsed())
            return cmd_score(score_masks_dir, score_mask_pattern, score_truth_dir,
                             score_truth_pattern, score_csv);
    } catch (const wavemotion::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const wavemotion::IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return kExitIo;
    } catch (const wavemotion::DegenerateDataError& e) {
        std::fprintf(stderr, "degenerate data: %s\n", e.what());
        return kExitDegenerate;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    return kExitOk;
}
