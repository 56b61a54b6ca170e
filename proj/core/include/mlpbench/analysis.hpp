#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mlpbench {

/// Amdahl's law triple: a fraction `p` of the work sped up by factor `s` gives overall speedup `S`.
struct AmdahlFit {
    double p = 0.0;
    double s = 1.0;
    double S = 1.0;
};

/// baseline / variant. Throws DomainError unless both are > 0.
[[nodiscard]] double speedup(double baseline_ns, double variant_ns);

/// S = 1 / ((1 - p) + p / s). Requires 0 <= p <= 1 and s >= 1.
[[nodiscard]] double amdahl_speedup(double p, double s);

/// Inverse of amdahl_speedup in p: p = (1 - 1/S) / (1 - 1/s). Requires s > 1 and 1 <= S <= s;
/// S > s is reported as superlinear, S < 1 as a slowdown (both DomainError).
[[nodiscard]] double estimate_parallel_fraction(double observed_speedup, double s);

/// Parallel fraction implied by an observed speedup on `threads` workers.
[[nodiscard]] AmdahlFit fit_amdahl(double observed_speedup, double threads);

inline constexpr double kDefaultKneeThreshold = 0.85;

struct KneePoint {
    double batch_size;
    /// Any series that should grow in proportion to batch size while the batch fits (runtime of
    /// one batch step, throughput speedup, ...). The detector is scale-free.
    double value;
};

struct KneeInterval {
    double lo;
    double hi;
};

struct KneeReport {
    std::vector<KneePoint> points;
    /// r_i = (v_{i+1} / v_i) / (b_{i+1} / b_i)
    std::vector<double> ratios;
    std::optional<KneeInterval> flagged_interval;
    std::optional<double> boundary_estimate;
    double threshold = kDefaultKneeThreshold;
};

/// Flags the longest contiguous run of adjacent pairs with r_i < threshold (the first such run
/// on ties) and estimates the boundary as the geometric mean of its end points.
/// Throws UsageError for fewer than 3 points, non-increasing batch sizes or non-positive values.
[[nodiscard]] KneeReport detect_knee(std::span<const KneePoint> points, double threshold = kDefaultKneeThreshold);

}  // namespace mlpbench
