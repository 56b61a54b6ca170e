#include <gtest/gtest.h>

#include <limits>

#include "mlpbench/errors.hpp"
#include "mlpbench/harness.hpp"
#include "mlpbench/params_io.hpp"
#include "mlpbench/splitmix64.hpp"

namespace mlpbench {
namespace {

BenchConfig quick_config(Strategy strategy) {
    BenchConfig config;
    config.run_id = "quick";
    config.strategy = strategy;
    config.network = NetworkConfig{{4, 6, 1}, ActivationKind::ReLU, LossKind::MSE, 0.05, 1};
    config.n_samples = 16;
    config.epochs = 3;
    config.repeats = 4;
    config.warmup_repeats = 1;
    return config;
}

TEST(Protocol, DefaultsMirrorMethodology) {
    const BenchConfig defaults;
    EXPECT_EQ(defaults.epochs, 1000U);
    EXPECT_EQ(defaults.repeats, 4U);
    EXPECT_EQ(defaults.warmup_repeats, 1U);
    EXPECT_EQ(kPhaseSplitEpochs, 100U);
    EXPECT_EQ(defaults.network.layer_widths, (std::vector<std::size_t>{16, 32, 1}));
}

TEST(RunBenchmark, EmitsFourRecordsPerRepeat) {
    for (const Strategy& s : {Strategy::sequential_online(), Strategy::batch_vectorized(4), Strategy::thread_map_reduce(2),
                              Strategy::thread_full_pipeline(3)}) {
        const BenchOutcome out = run_benchmark(quick_config(s));
        ASSERT_EQ(out.records.size(), 16U);
        for (std::size_t r = 0; r < 4; ++r) {
            std::int64_t phase_sum = 0;
            for (std::size_t k = 0; k < 3; ++k) phase_sum += out.records[4 * r + k].wall_ns;
            const TimingRecord& total = out.records[4 * r + 3];
            EXPECT_EQ(total.phase, Phase::Total);
            EXPECT_EQ(total.repeat_index, r);
            EXPECT_LE(phase_sum, total.wall_ns);
            for (std::size_t k = 0; k < 4; ++k) {
                EXPECT_GE(out.records[4 * r + k].wall_ns, 0);
                EXPECT_EQ(out.records[4 * r + k].run_id, "quick");
            }
        }
    }
}

TEST(RunBenchmark, RerunChangesOnlyTimings) {
    const BenchConfig config = quick_config(Strategy::thread_full_pipeline(2));
    const BenchOutcome a = run_benchmark(config);
    const BenchOutcome b = run_benchmark(config);
    EXPECT_EQ(a.final_params, b.final_params);
    EXPECT_EQ(params_digest(a.final_params), params_digest(b.final_params));
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        EXPECT_EQ(a.records[i].run_id, b.records[i].run_id);
        EXPECT_EQ(a.records[i].phase, b.records[i].phase);
        EXPECT_EQ(a.records[i].repeat_index, b.records[i].repeat_index);
    }
}

TEST(RunBenchmark, ConfigErrors) {
    BenchConfig config = quick_config(Strategy::sequential_online());
    config.repeats = 0;
    EXPECT_THROW((void)run_benchmark(config), ConfigError);
    config = quick_config(Strategy::batch_vectorized(17));
    EXPECT_THROW((void)run_benchmark(config), ConfigError);
    config = quick_config(Strategy::sequential_online());
    config.epochs = 0;
    EXPECT_THROW((void)run_benchmark(config), ConfigError);
}

TEST(RunBenchmark, DivergenceNamesEpoch) {
    BenchConfig config = quick_config(Strategy::batch_vectorized(16));
    config.network.learning_rate = 1e6;
    config.epochs = 200;
    config.repeats = 1;
    config.warmup_repeats = 0;
    try {
        (void)run_benchmark(config);
        FAIL() << "expected divergence";
    } catch (const DivergenceError& e) {
        EXPECT_LT(e.epoch(), 200U);
        EXPECT_NE(std::string(e.what()).find(std::to_string(e.epoch())), std::string::npos);
    }
}

TEST(MakeRecords, EnforcesPhaseSumBound) {
    EXPECT_NO_THROW((void)make_records("r", 0, PhaseTimings{1, 2, 3, 6}));
    EXPECT_THROW((void)make_records("r", 0, PhaseTimings{1, 2, 3, 5}), std::logic_error);
    EXPECT_THROW((void)make_records("r", 0, PhaseTimings{-1, 0, 0, 5}), std::logic_error);
}

TEST(Summarize, Statistics) {
    const std::vector<TimingRecord> records{
        {"a", 0, Phase::Total, 10}, {"a", 1, Phase::Total, 20}, {"a", 2, Phase::Total, 30},
        {"b", 0, Phase::Total, 7},  {"b", 1, Phase::Total, 7},
    };
    const Summary s = summarize(records);
    const PhaseStats& a = s.at({"a", Phase::Total});
    EXPECT_EQ(a.mean_ns, 20.0);
    EXPECT_EQ(a.min_ns, 10);
    EXPECT_EQ(a.max_ns, 30);
    EXPECT_NEAR(a.stddev_ns, 8.16496580927726, 1e-12);
    const PhaseStats& b = s.at({"b", Phase::Total});
    EXPECT_EQ(b.stddev_ns, 0.0);
    EXPECT_EQ(b.mean_ns, 7.0);
}

TEST(Summarize, SingleRepeatAndEmpty) {
    const std::vector<TimingRecord> one{{"a", 0, Phase::Forward, 42}};
    const PhaseStats& st = summarize(one).at({"a", Phase::Forward});
    EXPECT_EQ(st.min_ns, 42);
    EXPECT_EQ(st.max_ns, 42);
    EXPECT_EQ(st.mean_ns, 42.0);
    EXPECT_EQ(st.stddev_ns, 0.0);
    EXPECT_THROW((void)summarize(std::vector<TimingRecord>{}), UsageError);
}

TEST(Summarize, OrderingInvariantOnRandomInput) {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<TimingRecord> records;
        const std::size_t n = 1 + rng.next() % 10;
        for (std::size_t i = 0; i < n; ++i)
            records.push_back({"x", i, Phase::Update, static_cast<std::int64_t>(rng.next() % 1'000'000'000'000ULL)});
        const PhaseStats st = summarize(records).at({"x", Phase::Update});
        EXPECT_LE(static_cast<double>(st.min_ns), st.mean_ns);
        EXPECT_LE(st.mean_ns, static_cast<double>(st.max_ns));
        EXPECT_GE(st.stddev_ns, 0.0);
    }
}

}  // namespace
}  // namespace mlpbench
