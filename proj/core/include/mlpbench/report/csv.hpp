#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlpbench/harness.hpp"

namespace mlpbench {

inline constexpr std::string_view kCsvHeader =
    "run_id,strategy,activation,loss,batch_size,threads,epochs,repeat,phase,wall_ns";

/// One line of the timing CSV: a TimingRecord plus the run parameters needed to read it alone.
struct CsvRow {
    std::string run_id;
    StrategyKind strategy = StrategyKind::SequentialOnline;
    ActivationKind activation = ActivationKind::ReLU;
    LossKind loss = LossKind::MSE;
    std::optional<std::size_t> batch_size;
    std::optional<std::size_t> threads;
    std::size_t epochs = 0;
    std::size_t repeat = 0;
    Phase phase = Phase::Total;
    std::int64_t wall_ns = 0;

    [[nodiscard]] TimingRecord record() const { return {run_id, repeat, phase, wall_ns}; }

    friend bool operator==(const CsvRow&, const CsvRow&) = default;
};

[[nodiscard]] std::vector<CsvRow> csv_rows(const BenchConfig& config, std::span<const TimingRecord> records);

/// Header line then one row per record, '\n' line endings. run_id is quoted only when it
/// contains a comma, quote or line break.
[[nodiscard]] std::string emit_csv(std::span<const CsvRow> rows);

/// Inverse of emit_csv. Throws UsageError with the line number on malformed input.
[[nodiscard]] std::vector<CsvRow> parse_csv(std::string_view text);

}  // namespace mlpbench
