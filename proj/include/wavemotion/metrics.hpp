#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavemotion/types.hpp"

namespace wavemotion {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + tn + fp + fn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp;
        tn += o.tn;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
};

/// Tallies one frame against ground truth. Ignore-labelled truth pixels
/// contribute to no count.
inline ConfusionCounts accumulate(const SegmentationMask& mask, const GroundTruthMask& truth,
                                  ConfusionCounts acc = {}) {
    if (mask.height != truth.height || mask.width != truth.width)
        throw std::invalid_argument("accumulate: mask is " + std::to_string(mask.width) + "x" +
                                    std::to_string(mask.height) + " but truth is " +
                                    std::to_string(truth.width) + "x" +
                                    std::to_string(truth.height));
    const std::size_t n = mask.motion.size();
    for (std::size_t i = 0; i < n; ++i) {
        const TruthLabel t = truth.labels[i];
        if (t == TruthLabel::Ignore) continue;
        const bool predicted = mask.motion[i] != 0;
        const bool actual = t == TruthLabel::Motion;
        if (predicted && actual) ++acc.tp;
        else if (!predicted && !actual) ++acc.tn;
        else if (predicted) ++acc.fp;
        else ++acc.fn;
    }
    return acc;
}

/// The seven change-detection measures. FPR/FNR are the exact complements
/// of Sp/Re (same denominators). Any 0/0 ratio is reported as 0 with the
/// degenerate flag raised.
struct MetricReport {
    double re = 0.0;
    double sp = 0.0;
    double fpr = 0.0;
    double fnr = 0.0;
    double pwc = 0.0;
    double precision = 0.0;
    double f_measure = 0.0;
    bool degenerate = false;
};

inline MetricReport report(const ConfusionCounts& c) {
    if (c.total() == 0)
        throw std::invalid_argument("report: all four confusion counts are zero");
    MetricReport r;
    const double tp = static_cast<double>(c.tp);
    const double tn = static_cast<double>(c.tn);
    const double fp = static_cast<double>(c.fp);
    const double fn = static_cast<double>(c.fn);

    if (c.tp + c.fn > 0) {
        r.re = tp / (tp + fn);
        r.fnr = 1.0 - r.re;
    } else {
        r.degenerate = true;
    }
    if (c.tn + c.fp > 0) {
        r.sp = tn / (tn + fp);
        r.fpr = 1.0 - r.sp;
    } else {
        r.degenerate = true;
    }
    r.pwc = 100.0 * (fn + fp) / static_cast<double>(c.total());
    if (c.tp + c.fp > 0) {
        r.precision = tp / (tp + fp);
    } else {
        r.degenerate = true;
    }
    if (r.precision + r.re > 0.0) {
        r.f_measure = 2.0 * r.precision * r.re / (r.precision + r.re);
    } else {
        r.degenerate = true;
    }
    return r;
}

inline constexpr const char* kMetricsCsvHeader =
    "sequence,Re,Sp,FPR,FNR,PWC,Precision,F-measure";

struct SequenceScore {
    std::string name;
    MetricReport metrics;
};

namespace detail_metrics {

inline std::string csv_row(const std::string& name, const MetricReport& m) {
    std::ostringstream os;
    os << name << std::fixed << std::setprecision(6) << ',' << m.re << ',' << m.sp << ','
       << m.fpr << ',' << m.fnr << ',' << m.pwc << ',' << m.precision << ',' << m.f_measure;
    return os.str();
}

}  // namespace detail_metrics

/// One row per sequence plus an unweighted-mean `average` row.
inline std::string metrics_csv(const std::vector<SequenceScore>& scores) {
    std::string out = std::string(kMetricsCsvHeader) + "\n";
    MetricReport mean;
    for (const auto& s : scores) {
        out += detail_metrics::csv_row(s.name, s.metrics) + "\n";
        mean.re += s.metrics.re;
        mean.sp += s.metrics.sp;
        mean.fpr += s.metrics.fpr;
        mean.fnr += s.metrics.fnr;
        mean.pwc += s.metrics.pwc;
        mean.precision += s.metrics.precision;
        mean.f_measure += s.metrics.f_measure;
    }
    if (!scores.empty()) {
        const double inv = 1.0 / static_cast<double>(scores.size());
        mean.re *= inv;
        mean.sp *= inv;
        mean.fpr *= inv;
        mean.fnr *= inv;
        mean.pwc *= inv;
        mean.precision *= inv;
        mean.f_measure *= inv;
        out += detail_metrics::csv_row("average", mean) + "\n";
    }
    return out;
}

inline void write_metrics_csv(const std::string& path,
                              const std::vector<SequenceScore>& scores) {
    std::ofstream out(path);
    if (!out) throw IoError(path + ": cannot open file for writing");
    out << metrics_csv(scores);
    if (!out) throw IoError(path + ": write failed");
}

}  // namespace wavemotion
