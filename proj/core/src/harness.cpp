#include "mlpbench/harness.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "mlpbench/dataset.hpp"
#include "mlpbench/errors.hpp"
#include "mlpbench/worker_pool.hpp"

namespace mlpbench {

void BenchConfig::validate() const {
    if (run_id.empty()) throw ConfigError("run_id", "must not be empty");
    network.validate();
    if (n_samples == 0) throw ConfigError("n_samples", "must be at least 1");
    if (epochs == 0) throw ConfigError("epochs", "must be at least 1");
    if (repeats == 0) throw ConfigError("repeats", "must be at least 1");
    strategy.validate(n_samples);
}

std::string_view to_string(Phase phase) noexcept {
    switch (phase) {
        case Phase::Forward: return "forward";
        case Phase::Backward: return "backward";
        case Phase::Update: return "update";
        case Phase::Total: return "total";
    }
    return "unknown";
}

std::vector<TimingRecord> make_records(std::string_view run_id, std::size_t repeat_index,
                                       const PhaseTimings& timings) {
    if (timings.forward_ns < 0 || timings.backward_ns < 0 || timings.update_ns < 0 || timings.total_ns < 0) {
        throw std::logic_error("negative phase duration");
    }
    if (timings.forward_ns + timings.backward_ns + timings.update_ns > timings.total_ns) {
        throw std::logic_error("phase sum exceeds total wall time");
    }
    const std::string id(run_id);
    return {
        {id, repeat_index, Phase::Forward, timings.forward_ns},
        {id, repeat_index, Phase::Backward, timings.backward_ns},
        {id, repeat_index, Phase::Update, timings.update_ns},
        {id, repeat_index, Phase::Total, timings.total_ns},
    };
}

BenchOutcome run_benchmark(const BenchConfig& config) {
    config.validate();
    const TrainingSet data = make_dataset(config.n_samples, config.network, config.data_seed);

    std::unique_ptr<WorkerPool> pool;
    if (config.strategy.is_threaded()) pool = std::make_unique<WorkerPool>(*config.strategy.threads);

    auto run_once = [&] { return train(config.strategy, init_params(config.network), data, config.epochs,
                                       config.network, pool.get()); };

    for (std::size_t w = 0; w < config.warmup_repeats; ++w) (void)run_once();

    BenchOutcome outcome;
    outcome.records.reserve(4 * config.repeats);
    for (std::size_t r = 0; r < config.repeats; ++r) {
        TrainResult result = run_once();
        const auto bad = std::find_if(result.epoch_loss.begin(), result.epoch_loss.end(),
                                      [](double v) { return !std::isfinite(v); });
        if (bad != result.epoch_loss.end()) {
            throw DivergenceError(static_cast<std::size_t>(bad - result.epoch_loss.begin()));
        }
        auto records = make_records(config.run_id, r, result.timings);
        outcome.records.insert(outcome.records.end(), records.begin(), records.end());
        outcome.final_params = std::move(result.params);
        outcome.epoch_loss = std::move(result.epoch_loss);
    }
    return outcome;
}

Summary summarize(std::span<const TimingRecord> records) {
    if (records.empty()) throw UsageError("summarize: no timing records");
    std::map<SummaryKey, std::vector<std::int64_t>> grouped;
    for (const TimingRecord& rec : records) grouped[{rec.run_id, rec.phase}].push_back(rec.wall_ns);

    Summary summary;
    for (const auto& [key, values] : grouped) {
        PhaseStats stats;
        stats.count = values.size();
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        stats.min_ns = *lo;
        stats.max_ns = *hi;
        double sum = 0.0;
        for (const auto v : values) sum += static_cast<double>(v);
        stats.mean_ns = sum / static_cast<double>(values.size());
        double sq = 0.0;
        for (const auto v : values) {
            const double d = static_cast<double>(v) - stats.mean_ns;
            sq += d * d;
        }
        stats.stddev_ns = std::sqrt(sq / static_cast<double>(values.size()));
        // guard min <= mean <= max against rounding of huge nanosecond sums
        stats.mean_ns = std::clamp(stats.mean_ns, static_cast<double>(stats.min_ns), static_cast<double>(stats.max_ns));
        summary.emplace(key, stats);
    }
    return summary;
}

}  // namespace mlpbench
