#include "mlpbench/analysis.hpp"

#include <cmath>
#include <string>

#include "mlpbench/errors.hpp"

namespace mlpbench {

double speedup(double baseline_ns, double variant_ns) {
    if (!(baseline_ns > 0.0) || !(variant_ns > 0.0)) {
        throw DomainError("speedup: durations must be positive (baseline " + std::to_string(baseline_ns) +
                          ", variant " + std::to_string(variant_ns) + ")");
    }
    return baseline_ns / variant_ns;
}

double amdahl_speedup(double p, double s) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("amdahl_speedup: p must lie in [0, 1], got " + std::to_string(p));
    if (!(s >= 1.0) || !std::isfinite(s)) throw DomainError("amdahl_speedup: s must be >= 1, got " + std::to_string(s));
    return 1.0 / ((1.0 - p) + p / s);
}

double estimate_parallel_fraction(double observed_speedup, double s) {
    if (!(s > 1.0) || !std::isfinite(s)) {
        throw DomainError("estimate_parallel_fraction: s must be > 1, got " + std::to_string(s));
    }
    if (observed_speedup < 1.0) {
        throw DomainError("estimate_parallel_fraction: observed speedup " + std::to_string(observed_speedup) +
                          " is a slowdown");
    }
    if (observed_speedup > s) {
        throw DomainError("estimate_parallel_fraction: observed speedup " + std::to_string(observed_speedup) +
                          " exceeds s = " + std::to_string(s) + " (superlinear)");
    }
    return (1.0 - 1.0 / observed_speedup) / (1.0 - 1.0 / s);
}

AmdahlFit fit_amdahl(double observed_speedup, double threads) {
    const double p = estimate_parallel_fraction(observed_speedup, threads);
    return {p, threads, amdahl_speedup(p, threads)};
}

KneeReport detect_knee(std::span<const KneePoint> points, double threshold) {
    if (points.size() < 3) {
        throw UsageError("detect_knee: need at least 3 points, got " + std::to_string(points.size()));
    }
    if (!(threshold > 0.0)) throw UsageError("detect_knee: threshold must be positive");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].batch_size > 0.0) || !(points[i].value > 0.0)) {
            throw UsageError("detect_knee: batch sizes and values must be positive (point " + std::to_string(i) + ")");
        }
        if (i > 0 && !(points[i].batch_size > points[i - 1].batch_size)) {
            throw UsageError("detect_knee: batch sizes must be strictly increasing (point " + std::to_string(i) + ")");
        }
    }

    KneeReport report;
    report.points.assign(points.begin(), points.end());
    report.threshold = threshold;
    report.ratios.reserve(points.size() - 1);
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        report.ratios.push_back((points[i + 1].value / points[i].value) /
                                (points[i + 1].batch_size / points[i].batch_size));
    }

    std::size_t best_start = 0;
    std::size_t best_len = 0;
    for (std::size_t i = 0; i < report.ratios.size();) {
        if (!(report.ratios[i] < threshold)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < report.ratios.size() && report.ratios[j] < threshold) ++j;
        if (j - i > best_len) {
            best_start = i;
            best_len = j - i;
        }
        i = j;
    }
    if (best_len > 0) {
        const double lo = points[best_start].batch_size;
        const double hi = points[best_start + best_len].batch_size;
        report.flagged_interval = KneeInterval{lo, hi};
        report.boundary_estimate = std::sqrt(lo * hi);
    }
    return report;
}

}  // namespace mlpbench
