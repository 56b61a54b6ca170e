#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mlpbench/dataset.hpp"
#include "mlpbench/network.hpp"

namespace mlpbench {

class WorkerPool;

enum class StrategyKind { SequentialOnline, BatchVectorized, ThreadMapReduce, ThreadFullPipeline };

[[nodiscard]] std::string_view to_string(StrategyKind kind) noexcept;

/// Execution scheme plus its parameter: batch size for BatchVectorized, thread count for
/// the two threaded schemes. The unused parameter is always empty.
struct Strategy {
    StrategyKind kind = StrategyKind::SequentialOnline;
    std::optional<std::size_t> batch_size;
    std::optional<std::size_t> threads;

    static Strategy sequential_online() { return {StrategyKind::SequentialOnline, {}, {}}; }
    static Strategy batch_vectorized(std::size_t b) { return {StrategyKind::BatchVectorized, b, {}}; }
    static Strategy thread_map_reduce(std::size_t t) { return {StrategyKind::ThreadMapReduce, {}, t}; }
    static Strategy thread_full_pipeline(std::size_t t) { return {StrategyKind::ThreadFullPipeline, {}, t}; }

    [[nodiscard]] bool is_threaded() const noexcept {
        return kind == StrategyKind::ThreadMapReduce || kind == StrategyKind::ThreadFullPipeline;
    }

    /// Throws ConfigError ("batch_size" / "threads") when the parameter is missing or out of range.
    void validate(std::size_t n_samples) const;

    friend bool operator==(const Strategy&, const Strategy&) = default;
};

/// Wall-clock nanoseconds accumulated over a training run. The three phases are disjoint
/// sub-intervals of the total. For threaded schemes the forward/backward (and local update)
/// figures come from the slowest worker of each epoch; coordinator reduction and the shared
/// update count as Update.
struct PhaseTimings {
    std::int64_t forward_ns = 0;
    std::int64_t backward_ns = 0;
    std::int64_t update_ns = 0;
    std::int64_t total_ns = 0;
};

struct TrainResult {
    Params params;
    PhaseTimings timings;
    /// Mean loss of the predictions made during each epoch (before that batch's update).
    std::vector<double> epoch_loss;
};

/// Online SGD: forward, backward and update for every sample in index order.
[[nodiscard]] TrainResult train_sequential_online(Params params, const TrainingSet& data, std::size_t epochs,
                                                  const NetworkConfig& config);

/// ⌈N/B⌉ stacked batches in index order (the last may be short); one update per batch.
[[nodiscard]] TrainResult train_batch_vectorized(Params params, const TrainingSet& data, std::size_t batch_size,
                                                 std::size_t epochs, const NetworkConfig& config);

/// One full-batch step per epoch. Shard gradient sums are computed by `threads` workers against
/// the same frozen params, reduced in shard order, divided by N and applied by the caller thread.
/// A pool of matching size may be supplied to keep thread start-up out of the timings.
[[nodiscard]] TrainResult train_thread_map_reduce(Params params, const TrainingSet& data, std::size_t threads,
                                                  std::size_t epochs, const NetworkConfig& config,
                                                  WorkerPool* pool = nullptr);

/// Each worker runs online SGD over its shard on a private params copy; at the end of each epoch
/// the params become the arithmetic mean of the copies from workers with a non-empty shard (in shard order).
[[nodiscard]] TrainResult train_thread_full_pipeline(Params params, const TrainingSet& data, std::size_t threads,
                                                     std::size_t epochs, const NetworkConfig& config,
                                                     WorkerPool* pool = nullptr);

[[nodiscard]] TrainResult train(const Strategy& strategy, Params params, const TrainingSet& data,
                                std::size_t epochs, const NetworkConfig& config, WorkerPool* pool = nullptr);

/// [begin, end) row range of shard `index` when `n` rows are split contiguously across `shards`.
struct ShardRange {
    std::size_t begin;
    std::size_t end;
    [[nodiscard]] std::size_t size() const noexcept { return end - begin; }
};
[[nodiscard]] ShardRange shard_range(std::size_t n, std::size_t shards, std::size_t index) noexcept;

}  // namespace mlpbench
