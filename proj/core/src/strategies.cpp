#include "mlpbench/strategies.hpp"

#include <chrono>
#include <memory>
#include <stdexcept>
#include <string>

#include "mlpbench/errors.hpp"
#include "mlpbench/worker_pool.hpp"

namespace mlpbench {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ns(Clock::time_point since) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - since).count();
}

struct Batch {
    Matrix inputs;
    Matrix targets;
};

std::vector<Batch> make_batches(const TrainingSet& data, std::size_t begin, std::size_t end, std::size_t batch) {
    std::vector<Batch> out;
    for (std::size_t first = begin; first < end; first += batch) {
        const std::size_t count = std::min(batch, end - first);
        out.push_back({data.inputs.slice_rows(first, count), data.targets.slice_rows(first, count)});
    }
    return out;
}

struct PhaseCounters {
    std::int64_t forward_ns = 0;
    std::int64_t backward_ns = 0;
    std::int64_t update_ns = 0;

    [[nodiscard]] std::int64_t sum() const noexcept { return forward_ns + backward_ns + update_ns; }
};

/// forward / backward / update on one batch; returns the unnormalised loss sum of the batch.
double train_step(Params& params, const Batch& batch, const NetworkConfig& config, PhaseCounters& counters) {
    auto t0 = Clock::now();
    const ForwardCache cache = forward(params, batch.inputs, config);
    counters.forward_ns += elapsed_ns(t0);

    const double loss = loss_sum(config.loss, cache.output(), batch.targets);

    t0 = Clock::now();
    const Grads grads = backward_from_delta(
        params, cache, output_delta(cache.output(), batch.targets, static_cast<double>(batch.inputs.rows())), config);
    counters.backward_ns += elapsed_ns(t0);

    t0 = Clock::now();
    apply_update_in_place(params, grads, config.learning_rate);
    counters.update_ns += elapsed_ns(t0);
    return loss;
}

void require_epochs(std::size_t epochs) {
    if (epochs == 0) throw ConfigError("epochs", "must be at least 1");
}

void require_threads(std::size_t threads) {
    if (threads == 0) throw ConfigError("threads", "must be at least 1");
}

WorkerPool& resolve_pool(WorkerPool* supplied, std::unique_ptr<WorkerPool>& owned, std::size_t threads) {
    if (supplied != nullptr) {
        if (supplied->size() != threads) {
            throw std::invalid_argument("worker pool has " + std::to_string(supplied->size()) +
                                        " workers, strategy needs " + std::to_string(threads));
        }
        return *supplied;
    }
    owned = std::make_unique<WorkerPool>(threads);
    return *owned;
}

TrainResult run_batched(Params params, const TrainingSet& data, std::size_t batch_size, std::size_t epochs,
                        const NetworkConfig& config) {
    require_epochs(epochs);
    const std::vector<Batch> batches = make_batches(data, 0, data.size(), batch_size);
    const double n = static_cast<double>(data.size());

    TrainResult result;
    result.epoch_loss.reserve(epochs);
    PhaseCounters counters;
    const auto start = Clock::now();
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        double loss = 0.0;
        for (const Batch& batch : batches) loss += train_step(params, batch, config, counters);
        result.epoch_loss.push_back(loss / n);
    }
    result.timings = {counters.forward_ns, counters.backward_ns, counters.update_ns, elapsed_ns(start)};
    result.params = std::move(params);
    return result;
}

}  // namespace

std::string_view to_string(StrategyKind kind) noexcept {
    switch (kind) {
        case StrategyKind::SequentialOnline: return "sequential_online";
        case StrategyKind::BatchVectorized: return "batch_vectorized";
        case StrategyKind::ThreadMapReduce: return "thread_map_reduce";
        case StrategyKind::ThreadFullPipeline: return "thread_full_pipeline";
    }
    return "unknown";
}

void Strategy::validate(std::size_t n_samples) const {
    if (kind == StrategyKind::BatchVectorized) {
        if (!batch_size) throw ConfigError("batch_size", "required for batch_vectorized");
        if (*batch_size == 0 || *batch_size > n_samples) {
            throw ConfigError("batch_size", "must be in [1, n_samples=" + std::to_string(n_samples) + "], got " +
                                                std::to_string(*batch_size));
        }
    } else if (batch_size) {
        throw ConfigError("batch_size", "only meaningful for batch_vectorized");
    }
    if (is_threaded()) {
        if (!threads) throw ConfigError("threads", "required for threaded strategies");
        require_threads(*threads);
    } else if (threads) {
        throw ConfigError("threads", "only meaningful for threaded strategies");
    }
}

ShardRange shard_range(std::size_t n, std::size_t shards, std::size_t index) noexcept {
    return {index * n / shards, (index + 1) * n / shards};
}

TrainResult train_sequential_online(Params params, const TrainingSet& data, std::size_t epochs,
                                    const NetworkConfig& config) {
    return run_batched(std::move(params), data, 1, epochs, config);
}

TrainResult train_batch_vectorized(Params params, const TrainingSet& data, std::size_t batch_size,
                                   std::size_t epochs, const NetworkConfig& config) {
    if (batch_size == 0 || batch_size > data.size()) {
        throw ConfigError("batch_size", "must be in [1, " + std::to_string(data.size()) + "], got " +
                                            std::to_string(batch_size));
    }
    return run_batched(std::move(params), data, batch_size, epochs, config);
}

TrainResult train_thread_map_reduce(Params params, const TrainingSet& data, std::size_t threads, std::size_t epochs,
                                    const NetworkConfig& config, WorkerPool* pool) {
    require_epochs(epochs);
    require_threads(threads);
    std::unique_ptr<WorkerPool> owned;
    WorkerPool& workers = resolve_pool(pool, owned, threads);

    std::vector<std::optional<Batch>> shards(threads);
    for (std::size_t s = 0; s < threads; ++s) {
        const ShardRange r = shard_range(data.size(), threads, s);
        if (r.size() > 0) shards[s] = make_batches(data, r.begin, r.end, r.size()).front();
    }

    struct WorkerState {
        std::optional<Grads> grad_sum;
        double loss = 0.0;
        PhaseCounters counters;
    };
    std::vector<WorkerState> state(threads);
    const double n = static_cast<double>(data.size());

    TrainResult result;
    result.epoch_loss.reserve(epochs);
    PhaseCounters totals;
    const auto start = Clock::now();
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        workers.run([&](std::size_t w) {
            WorkerState& st = state[w];
            st = WorkerState{};
            if (!shards[w]) return;
            const Batch& shard = *shards[w];
            auto t0 = Clock::now();
            const ForwardCache cache = forward(params, shard.inputs, config);
            st.counters.forward_ns = elapsed_ns(t0);
            st.loss = loss_sum(config.loss, cache.output(), shard.targets);
            t0 = Clock::now();
            st.grad_sum = backward_from_delta(params, cache, output_delta(cache.output(), shard.targets, 1.0), config);
            st.counters.backward_ns = elapsed_ns(t0);
        });

        const WorkerState* critical = &state.front();
        for (const WorkerState& st : state) {
            if (st.counters.sum() > critical->counters.sum()) critical = &st;
        }
        totals.forward_ns += critical->counters.forward_ns;
        totals.backward_ns += critical->counters.backward_ns;

        const auto t0 = Clock::now();
        std::optional<Grads> reduced;
        double loss = 0.0;
        for (WorkerState& st : state) {
            if (!st.grad_sum) continue;
            loss += st.loss;
            if (!reduced) {
                reduced = std::move(st.grad_sum);
            } else {
                accumulate(*reduced, *st.grad_sum);
            }
        }
        divide_in_place(*reduced, n);
        apply_update_in_place(params, *reduced, config.learning_rate);
        totals.update_ns += elapsed_ns(t0);
        result.epoch_loss.push_back(loss / n);
    }
    result.timings = {totals.forward_ns, totals.backward_ns, totals.update_ns, elapsed_ns(start)};
    result.params = std::move(params);
    return result;
}

TrainResult train_thread_full_pipeline(Params params, const TrainingSet& data, std::size_t threads,
                                       std::size_t epochs, const NetworkConfig& config, WorkerPool* pool) {
    require_epochs(epochs);
    require_threads(threads);
    std::unique_ptr<WorkerPool> owned;
    WorkerPool& workers = resolve_pool(pool, owned, threads);

    std::vector<std::vector<Batch>> shards(threads);
    for (std::size_t s = 0; s < threads; ++s) {
        const ShardRange r = shard_range(data.size(), threads, s);
        shards[s] = make_batches(data, r.begin, r.end, 1);
    }

    struct WorkerState {
        Params local;
        double loss = 0.0;
        PhaseCounters counters;
    };
    std::vector<WorkerState> state(threads);
    const double n = static_cast<double>(data.size());

    TrainResult result;
    result.epoch_loss.reserve(epochs);
    PhaseCounters totals;
    const auto start = Clock::now();
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        workers.run([&](std::size_t w) {
            WorkerState& st = state[w];
            st.local = params;
            st.loss = 0.0;
            st.counters = {};
            for (const Batch& sample : shards[w]) st.loss += train_step(st.local, sample, config, st.counters);
        });

        const WorkerState* critical = &state.front();
        for (const WorkerState& st : state) {
            if (st.counters.sum() > critical->counters.sum()) critical = &st;
        }
        totals.forward_ns += critical->counters.forward_ns;
        totals.backward_ns += critical->counters.backward_ns;
        totals.update_ns += critical->counters.update_ns;

        const auto t0 = Clock::now();
        // Workers whose shard is empty (threads > N) hold unchanged params and stay out of the mean.
        double loss = 0.0;
        std::size_t averaged = 0;
        for (std::size_t w = 0; w < threads; ++w) {
            if (shards[w].empty()) continue;
            ++averaged;
            if (averaged == 1) {
                params = std::move(state[w].local);
            } else {
                running_mean_update(params, state[w].local, averaged);
            }
            loss += state[w].loss;
        }
        totals.update_ns += elapsed_ns(t0);
        result.epoch_loss.push_back(loss / n);
    }
    result.timings = {totals.forward_ns, totals.backward_ns, totals.update_ns, elapsed_ns(start)};
    result.params = std::move(params);
    return result;
}

TrainResult train(const Strategy& strategy, Params params, const TrainingSet& data, std::size_t epochs,
                  const NetworkConfig& config, WorkerPool* pool) {
    strategy.validate(data.size());
    switch (strategy.kind) {
        case StrategyKind::SequentialOnline:
            return train_sequential_online(std::move(params), data, epochs, config);
        case StrategyKind::BatchVectorized:
            return train_batch_vectorized(std::move(params), data, *strategy.batch_size, epochs, config);
        case StrategyKind::ThreadMapReduce:
            return train_thread_map_reduce(std::move(params), data, *strategy.threads, epochs, config, pool);
        case StrategyKind::ThreadFullPipeline:
            return train_thread_full_pipeline(std::move(params), data, *strategy.threads, epochs, config, pool);
    }
    throw std::logic_error("unhandled strategy kind");
}

}  // namespace mlpbench
