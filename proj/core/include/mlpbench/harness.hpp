#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlpbench/network.hpp"
#include "mlpbench/strategies.hpp"

namespace mlpbench {

/// Default protocols: end-to-end runs use 1000 epochs, phase-split runs 100 epochs, both
/// repeated 4 times after one discarded warm-up run.
inline constexpr std::size_t kEndToEndEpochs = 1000;
inline constexpr std::size_t kPhaseSplitEpochs = 100;
inline constexpr std::size_t kDefaultRepeats = 4;
inline constexpr std::size_t kDefaultWarmupRepeats = 1;

struct BenchConfig {
    std::string run_id = "run";
    Strategy strategy = Strategy::sequential_online();
    NetworkConfig network;
    std::size_t n_samples = 256;
    std::size_t epochs = kEndToEndEpochs;
    std::size_t repeats = kDefaultRepeats;
    std::size_t warmup_repeats = kDefaultWarmupRepeats;
    std::uint64_t data_seed = 7;

    /// Throws ConfigError naming the offending key.
    void validate() const;

    friend bool operator==(const BenchConfig&, const BenchConfig&) = default;
};

enum class Phase { Forward, Backward, Update, Total };

inline constexpr Phase kAllPhases[] = {Phase::Forward, Phase::Backward, Phase::Update, Phase::Total};

[[nodiscard]] std::string_view to_string(Phase phase) noexcept;

struct TimingRecord {
    std::string run_id;
    std::size_t repeat_index = 0;
    Phase phase = Phase::Total;
    std::int64_t wall_ns = 0;

    friend bool operator==(const TimingRecord&, const TimingRecord&) = default;
};

/// The four records of one repeat. Throws std::logic_error if the phase sum exceeds the total
/// or any duration is negative.
[[nodiscard]] std::vector<TimingRecord> make_records(std::string_view run_id, std::size_t repeat_index,
                                                     const PhaseTimings& timings);

struct BenchOutcome {
    std::vector<TimingRecord> records;
    /// Params after the last timed repeat; identical for every repeat.
    Params final_params;
    std::vector<double> epoch_loss;
};

/// Warm-up runs (discarded) then `repeats` timed runs, each from freshly initialised params.
/// Throws DivergenceError if a timed run produces a non-finite epoch loss.
[[nodiscard]] BenchOutcome run_benchmark(const BenchConfig& config);

struct PhaseStats {
    double mean_ns = 0.0;
    std::int64_t min_ns = 0;
    std::int64_t max_ns = 0;
    double stddev_ns = 0.0;  // population
    std::size_t count = 0;
};

struct SummaryKey {
    std::string run_id;
    Phase phase;
    auto operator<=>(const SummaryKey&) const = default;
};

using Summary = std::map<SummaryKey, PhaseStats>;

/// Throws UsageError on empty input.
[[nodiscard]] Summary summarize(std::span<const TimingRecord> records);

}  // namespace mlpbench
