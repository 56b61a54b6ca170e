#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlpbench/analysis.hpp"
#include "mlpbench/harness.hpp"
#include "mlpbench/report/csv.hpp"

namespace mlpbench {

/// Everything persisted about one benchmark run.
struct RunArtifact {
    BenchConfig config;
    /// False when the artifact was rebuilt from CSV alone, in which case layer widths and seeds
    /// are unknown and excluded from compatibility checks.
    bool config_complete = true;
    std::vector<TimingRecord> records;
    Summary summary;
    /// FNV-1a over the exported bytes of the trained params.
    std::optional<std::uint64_t> params_digest;
    std::optional<double> initial_loss;
    std::optional<double> final_loss;
};

/// Benchmarks `config` and packages the result, including full-batch losses before and after training.
[[nodiscard]] RunArtifact make_artifact(const BenchConfig& config, const BenchOutcome& outcome);

/// Groups CSV rows by run_id (first-seen order) into partial artifacts.
[[nodiscard]] std::vector<RunArtifact> artifacts_from_csv(std::span<const CsvRow> rows);

[[nodiscard]] nlohmann::json artifact_to_json(const RunArtifact& artifact);
[[nodiscard]] RunArtifact artifact_from_json(const nlohmann::json& doc);

/// Minimum-over-repeats time per epoch for every phase of one run.
struct RunTimes {
    std::string run_id;
    Strategy strategy;
    ActivationKind activation = ActivationKind::ReLU;
    std::map<Phase, double> min_ns_per_epoch;
    std::map<Phase, double> mean_ns_per_epoch;
};

struct VariantComparison {
    std::string run_id;
    Strategy strategy;
    ActivationKind activation = ActivationKind::ReLU;
    /// baseline / variant on min-per-epoch times; absent for a phase with a zero time.
    std::map<Phase, double> speedup;
    /// Only for threaded variants with t > 1 whose speedup lies in [1, t].
    std::optional<AmdahlFit> amdahl;
    /// Why a threaded variant has no Amdahl fit.
    std::optional<std::string> amdahl_note;
};

/// ReLU against Sigmoid for one strategy: per-phase min-per-epoch times and relu / sigmoid ratios.
struct ActivationRow {
    std::string strategy_label;
    std::string relu_run_id;
    std::string sigmoid_run_id;
    std::map<Phase, double> relu_ns;
    std::map<Phase, double> sigmoid_ns;
    std::map<Phase, double> relu_over_sigmoid;
};

struct ComparisonReport {
    std::string baseline_run_id;
    /// Baseline first, then the variants in input order.
    std::vector<RunTimes> runs;
    std::vector<VariantComparison> variants;
    /// Present when the variants hold at least three batch_vectorized runs with distinct batch
    /// sizes; the series is total speedup against batch size.
    std::optional<KneeReport> knee;
    std::vector<ActivationRow> activation_table;
};

/// Label such as "batch_vectorized(b=128)" or "thread_map_reduce(t=4)".
[[nodiscard]] std::string strategy_label(const Strategy& strategy);

/// Throws ComparisonError if any artifact differs from the baseline in layer widths, loss,
/// sample count or data seed. Activation may differ.
[[nodiscard]] ComparisonReport compare_runs(const RunArtifact& baseline, std::span<const RunArtifact> variants,
                                            double knee_threshold = kDefaultKneeThreshold);

[[nodiscard]] nlohmann::json report_to_json(const ComparisonReport& report);
[[nodiscard]] ComparisonReport report_from_json(const nlohmann::json& doc);

/// {"series": [{"name", "x_label", "y_label", "points": [[x, y], ...], "labels"?: [...]}, ...]}
[[nodiscard]] std::string emit_plot_data(const ComparisonReport& report);

/// Fixed-width text rendering of the activation table and speedups.
[[nodiscard]] std::string format_report_text(const ComparisonReport& report);

}  // namespace mlpbench
