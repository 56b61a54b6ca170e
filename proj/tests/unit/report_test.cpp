#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "mlpbench/errors.hpp"
#include "mlpbench/report/compare.hpp"
#include "mlpbench/report/config.hpp"
#include "mlpbench/report/csv.hpp"
#include "mlpbench/splitmix64.hpp"

namespace mlpbench {
namespace {

using nlohmann::json;

std::string config_error_key(const json& doc, const FlagOverrides& flags = {}) {
    try {
        (void)parse_config(doc, flags);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "<none>";
}

TEST(ParseConfig, EmptyDocumentGivesDefaults) {
    const BenchConfig c = parse_config(json::object());
    EXPECT_EQ(c.epochs, 1000U);
    EXPECT_EQ(c.repeats, 4U);
    EXPECT_EQ(c.warmup_repeats, 1U);
    EXPECT_EQ(c.network.layer_widths, (std::vector<std::size_t>{16, 32, 1}));
    EXPECT_EQ(c.network.activation, ActivationKind::ReLU);
    EXPECT_EQ(c.network.loss, LossKind::MSE);
    EXPECT_EQ(c.network.learning_rate, 0.05);
    EXPECT_EQ(c.n_samples, 256U);
    EXPECT_EQ(c.strategy, Strategy::sequential_online());
}

TEST(ParseConfig, EmptyFileGivesDefaults) {
    const auto path = std::filesystem::temp_directory_path() / "mlpbench_empty_config.json";
    std::ofstream(path).close();
    const BenchConfig c = load_config(path);
    EXPECT_EQ(c.epochs, 1000U);
    EXPECT_EQ(c.repeats, 4U);
    std::filesystem::remove(path);
}

TEST(ParseConfig, FlagsOverrideFile) {
    const json doc = {{"epochs", 10}, {"strategy", "batch_vectorized"}, {"batch_size", 8}};
    const BenchConfig c = parse_config(doc, {{"epochs", "100"}, {"layer_widths", "4,5,2"}, {"seed", "18446744073709551615"}});
    EXPECT_EQ(c.epochs, 100U);
    EXPECT_EQ(c.strategy, Strategy::batch_vectorized(8));
    EXPECT_EQ(c.network.layer_widths, (std::vector<std::size_t>{4, 5, 2}));
    EXPECT_EQ(c.network.seed, 18446744073709551615ULL);
}

TEST(ParseConfig, StrategyDefaults) {
    EXPECT_EQ(parse_config({{"strategy", "batch_vectorized"}, {"n_samples", 64}}).strategy, Strategy::batch_vectorized(64));
    EXPECT_EQ(parse_config({{"strategy", "thread_map_reduce"}}).strategy, Strategy::thread_map_reduce(4));
    EXPECT_EQ(parse_config({{"strategy", "thread_full_pipeline"}, {"threads", 2}}).strategy,
              Strategy::thread_full_pipeline(2));
}

TEST(ParseConfig, ErrorsNameTheKey) {
    EXPECT_EQ(config_error_key({{"strategy", "batch_vectorized"}, {"batch_size", 0}}), "batch_size");
    EXPECT_EQ(config_error_key({{"strategy", "batch_vectorized"}, {"batch_size", 300}}), "batch_size");
    EXPECT_EQ(config_error_key({{"batch_size", 4}}), "batch_size");
    EXPECT_EQ(config_error_key({{"bogus", 1}}), "bogus");
    EXPECT_EQ(config_error_key({{"epochs", 0}}), "epochs");
    EXPECT_EQ(config_error_key({{"epochs", -3}}), "epochs");
    EXPECT_EQ(config_error_key({{"epochs", 2.5}}), "epochs");
    EXPECT_EQ(config_error_key({{"epochs", "ten"}}), "epochs");
    EXPECT_EQ(config_error_key({{"repeats", 0}}), "repeats");
    EXPECT_EQ(config_error_key({{"learning_rate", 0}}), "learning_rate");
    EXPECT_EQ(config_error_key({{"learning_rate", "fast"}}), "learning_rate");
    EXPECT_EQ(config_error_key({{"layer_widths", {16}}}), "layer_widths");
    EXPECT_EQ(config_error_key({{"layer_widths", {16, 0, 1}}}), "layer_widths");
    EXPECT_EQ(config_error_key({{"layer_widths", 16}}), "layer_widths");
    EXPECT_EQ(config_error_key({{"activation", "tanh"}}), "activation");
    EXPECT_EQ(config_error_key({{"loss", "hinge"}}), "loss");
    EXPECT_EQ(config_error_key({{"strategy", "gpu"}}), "strategy");
    EXPECT_EQ(config_error_key({{"strategy", "thread_map_reduce"}, {"threads", 0}}), "threads");
    EXPECT_EQ(config_error_key({{"n_samples", 0}}), "n_samples");
    EXPECT_EQ(config_error_key({{"run_id", ""}}), "run_id");
    EXPECT_EQ(config_error_key({{"run_id", 5}}), "run_id");
    EXPECT_EQ(config_error_key(json::object(), {{"epochs", "abc"}}), "epochs");
    EXPECT_EQ(config_error_key(json::object(), {{"colour", "red"}}), "colour");
    EXPECT_EQ(config_error_key(json::array()), "<root>");
}

TEST(ParseConfig, TotalOverRandomValues) {
    // any value of any type for any documented key yields a config or a ConfigError, nothing else
    const std::vector<std::string> keys{"run_id", "strategy", "activation", "loss", "layer_widths", "learning_rate", "seed",
                                        "data_seed", "n_samples", "epochs", "repeats", "warmup_repeats", "batch_size", "threads"};
    const std::vector<json> values{json(nullptr), json(true), json(-1), json(0), json(3), json(1.5), json("x"),
                                   json::array(), json::array({1, 2}), json::object(), json(1e300)};
    SplitMix64 rng(1);
    for (int trial = 0; trial < 2000; ++trial) {
        json doc = json::object();
        const std::size_t n = rng.next() % 4;
        for (std::size_t k = 0; k < n; ++k) doc[keys[rng.next() % keys.size()]] = values[rng.next() % values.size()];
        try {
            (void)parse_config(doc);
        } catch (const ConfigError&) {
        }
    }
}

TEST(ParseConfig, JsonRoundTrip) {
    const BenchConfig c = parse_config({{"strategy", "thread_full_pipeline"}, {"threads", 3}, {"activation", "sigmoid"},
                                        {"loss", "bce"}, {"seed", 9}, {"run_id", "x"}});
    EXPECT_EQ(parse_config(config_to_json(c)), c);
}

std::vector<CsvRow> sample_rows() {
    return {
        {"base", StrategyKind::SequentialOnline, ActivationKind::ReLU, LossKind::MSE, {}, {}, 1000, 0, Phase::Forward, 12},
        {"b,64 \"x\"", StrategyKind::BatchVectorized, ActivationKind::Sigmoid, LossKind::BCE, 64, {}, 100, 3, Phase::Total, 0},
        {"t4", StrategyKind::ThreadFullPipeline, ActivationKind::ReLU, LossKind::MSE, {}, 4, 1, 1, Phase::Update,
         9223372036854775807},
    };
}

TEST(Csv, HeaderAndStructure) {
    EXPECT_EQ(emit_csv({}), "run_id,strategy,activation,loss,batch_size,threads,epochs,repeat,phase,wall_ns\n");
    const auto rows = sample_rows();
    const std::string one = emit_csv(std::span(rows).first(1));
    EXPECT_EQ(one, std::string(kCsvHeader) + "\nbase,sequential_online,relu,mse,,,1000,0,forward,12\n");
}

TEST(Csv, RoundTrip) {
    const auto rows = sample_rows();
    EXPECT_EQ(parse_csv(emit_csv(rows)), rows);
    SplitMix64 rng(77);
    std::vector<CsvRow> random;
    for (int i = 0; i < 200; ++i) {
        CsvRow row;
        row.run_id = "run" + std::to_string(rng.next() % 1000) + (rng.next() % 2 ? ",\"q\"" : "");
        row.strategy = static_cast<StrategyKind>(rng.next() % 4);
        row.activation = static_cast<ActivationKind>(rng.next() % 2);
        row.loss = static_cast<LossKind>(rng.next() % 2);
        if (row.strategy == StrategyKind::BatchVectorized) row.batch_size = 1 + rng.next() % 1024;
        if (row.strategy == StrategyKind::ThreadMapReduce || row.strategy == StrategyKind::ThreadFullPipeline)
            row.threads = 1 + rng.next() % 16;
        row.epochs = rng.next() % 5000;
        row.repeat = rng.next() % 8;
        row.phase = kAllPhases[rng.next() % 4];
        row.wall_ns = static_cast<std::int64_t>(rng.next() >> 1);
        random.push_back(row);
    }
    EXPECT_EQ(parse_csv(emit_csv(random)), random);
}

TEST(Csv, RejectsMalformed) {
    EXPECT_THROW((void)parse_csv("nope\n"), UsageError);
    EXPECT_THROW((void)parse_csv(std::string(kCsvHeader) + "\na,b\n"), UsageError);
    EXPECT_THROW((void)parse_csv(std::string(kCsvHeader) + "\nr,sequential_online,relu,mse,,,1,0,forward,-5\n"), UsageError);
    EXPECT_THROW((void)parse_csv(std::string(kCsvHeader) + "\nr,warp,relu,mse,,,1,0,forward,5\n"), UsageError);
    EXPECT_THROW((void)parse_csv(std::string(kCsvHeader) + "\n\"r,sequential_online\n"), UsageError);
}

RunArtifact synthetic_artifact(const std::string& id, Strategy strategy, std::vector<std::int64_t> totals,
                               ActivationKind act = ActivationKind::ReLU, std::size_t epochs = 10) {
    RunArtifact a;
    a.config.run_id = id;
    a.config.strategy = strategy;
    a.config.network.activation = act;
    a.config.epochs = epochs;
    a.config.n_samples = 1024;
    for (std::size_t r = 0; r < totals.size(); ++r) {
        const std::int64_t t = totals[r];
        for (const auto& rec : make_records(id, r, PhaseTimings{t / 4, t / 2, t / 8, t})) a.records.push_back(rec);
    }
    a.summary = summarize(a.records);
    return a;
}

TEST(CompareRuns, SelfComparisonIsExactlyOne) {
    const RunArtifact a = synthetic_artifact("base", Strategy::sequential_online(), {4000, 3900, 4100});
    const ComparisonReport report = compare_runs(a, std::span(&a, 1));
    ASSERT_EQ(report.variants.size(), 1U);
    for (const Phase p : kAllPhases) EXPECT_EQ(report.variants[0].speedup.at(p), 1.0);
    EXPECT_FALSE(report.variants[0].amdahl);
}

TEST(CompareRuns, QuarterTimeOnSixThreadsGivesNinetyPercent) {
    const RunArtifact base = synthetic_artifact("base", Strategy::sequential_online(), {4000, 4400});
    const std::vector<RunArtifact> variants{synthetic_artifact("t6", Strategy::thread_map_reduce(6), {1000, 1200})};
    const ComparisonReport report = compare_runs(base, variants);
    EXPECT_EQ(report.variants[0].speedup.at(Phase::Total), 4.0);
    ASSERT_TRUE(report.variants[0].amdahl);
    EXPECT_NEAR(report.variants[0].amdahl->p, 0.9, 1e-12);
    EXPECT_EQ(report.variants[0].amdahl->s, 6.0);
}

TEST(CompareRuns, InfeasibleAmdahlIsNotedNotFitted) {
    const RunArtifact base = synthetic_artifact("base", Strategy::sequential_online(), {4000});
    const std::vector<RunArtifact> variants{synthetic_artifact("slow", Strategy::thread_map_reduce(4), {8000}),
                                            synthetic_artifact("t1", Strategy::thread_map_reduce(1), {4000})};
    const ComparisonReport report = compare_runs(base, variants);
    EXPECT_FALSE(report.variants[0].amdahl);
    EXPECT_TRUE(report.variants[0].amdahl_note);
    EXPECT_FALSE(report.variants[1].amdahl);
    EXPECT_FALSE(report.variants[1].amdahl_note);
}

TEST(CompareRuns, PerEpochNormalisation) {
    const RunArtifact base = synthetic_artifact("base", Strategy::sequential_online(), {8000}, ActivationKind::ReLU, 20);
    const std::vector<RunArtifact> variants{synthetic_artifact("v", Strategy::batch_vectorized(8), {1000}, ActivationKind::ReLU, 10)};
    EXPECT_EQ(compare_runs(base, variants).variants[0].speedup.at(Phase::Total), 4.0);
}

TEST(CompareRuns, MismatchedSeedsOrArchitecture) {
    const RunArtifact base = synthetic_artifact("base", Strategy::sequential_online(), {4000});
    RunArtifact other = synthetic_artifact("v", Strategy::sequential_online(), {4000});
    other.config.data_seed = base.config.data_seed + 1;
    EXPECT_THROW((void)compare_runs(base, std::span(&other, 1)), ComparisonError);
    other = synthetic_artifact("v", Strategy::sequential_online(), {4000});
    other.config.network.layer_widths = {16, 8, 1};
    EXPECT_THROW((void)compare_runs(base, std::span(&other, 1)), ComparisonError);
    other = synthetic_artifact("v", Strategy::sequential_online(), {4000});
    other.config.network.loss = LossKind::BCE;
    EXPECT_THROW((void)compare_runs(base, std::span(&other, 1)), ComparisonError);
    other = synthetic_artifact("v", Strategy::sequential_online(), {4000}, ActivationKind::Sigmoid);
    EXPECT_NO_THROW((void)compare_runs(base, std::span(&other, 1)));
}

TEST(CompareRuns, BatchFamilyGetsKneeReport) {
    // per-epoch total t(b) chosen so the speedup series is the canonical one: 1,2,4,...,32,51.2,81.92,...
    const std::vector<double> speedups{1, 2, 4, 8, 16, 32, 51.2, 81.92, 163.84, 327.68};
    const RunArtifact base = synthetic_artifact("base", Strategy::sequential_online(), {1'000'000'000});
    std::vector<RunArtifact> variants;
    for (std::size_t i = 0; i < speedups.size(); ++i) {
        const auto b = std::size_t{1} << i;
        variants.push_back(synthetic_artifact("b" + std::to_string(b), Strategy::batch_vectorized(b),
                                              {static_cast<std::int64_t>(std::llround(1e9 / speedups[i]))}));
    }
    const ComparisonReport report = compare_runs(base, variants);
    ASSERT_TRUE(report.knee);
    ASSERT_TRUE(report.knee->flagged_interval);
    EXPECT_EQ(report.knee->flagged_interval->lo, 32.0);
    EXPECT_EQ(report.knee->flagged_interval->hi, 128.0);
    EXPECT_EQ(*report.knee->boundary_estimate, 64.0);

    const json plot = json::parse(emit_plot_data(report));
    bool runtime_seen = false, knee_seen = false;
    for (const json& s : plot.at("series")) {
        if (s.at("name") == "runtime_vs_batch") {
            runtime_seen = true;
            EXPECT_EQ(s.at("points").size(), speedups.size());
        }
        if (s.at("name") == "knee_interval") {
            knee_seen = true;
            ASSERT_EQ(s.at("points").size(), 2U);
            EXPECT_EQ(s.at("points")[0][0], 32.0);
            EXPECT_EQ(s.at("points")[1][0], 128.0);
        }
    }
    EXPECT_TRUE(runtime_seen);
    EXPECT_TRUE(knee_seen);
}

TEST(CompareRuns, ActivationTablePerStrategy) {
    const RunArtifact base = synthetic_artifact("seq-relu", Strategy::sequential_online(), {4000});
    const std::vector<RunArtifact> variants{
        synthetic_artifact("seq-sig", Strategy::sequential_online(), {5000}, ActivationKind::Sigmoid),
        synthetic_artifact("b8-relu", Strategy::batch_vectorized(8), {1000}),
        synthetic_artifact("b8-sig", Strategy::batch_vectorized(8), {800}, ActivationKind::Sigmoid),
        synthetic_artifact("mr-relu", Strategy::thread_map_reduce(2), {3000}),
    };
    const ComparisonReport report = compare_runs(base, variants);
    ASSERT_EQ(report.activation_table.size(), 2U);
    EXPECT_EQ(report.activation_table[0].strategy_label, "sequential_online");
    EXPECT_EQ(report.activation_table[0].relu_over_sigmoid.at(Phase::Total), 0.8);
    EXPECT_EQ(report.activation_table[1].strategy_label, "batch_vectorized(b=8)");
    EXPECT_EQ(report.activation_table[1].relu_over_sigmoid.at(Phase::Total), 1.25);
    EXPECT_NE(format_report_text(report).find("relu vs sigmoid"), std::string::npos);
}

TEST(Report, JsonRoundTrip) {
    const RunArtifact base = synthetic_artifact("base", Strategy::sequential_online(), {4000, 4100});
    const std::vector<RunArtifact> variants{synthetic_artifact("t4", Strategy::thread_map_reduce(4), {2000}),
                                            synthetic_artifact("sig", Strategy::sequential_online(), {4100}, ActivationKind::Sigmoid)};
    const ComparisonReport report = compare_runs(base, variants);
    const json doc = report_to_json(report);
    EXPECT_EQ(report_to_json(report_from_json(doc)), doc);
}

TEST(Report, ArtifactJsonAndCsvReconstruction) {
    const RunArtifact a = synthetic_artifact("base", Strategy::batch_vectorized(4), {4000, 4100});
    const RunArtifact back = artifact_from_json(artifact_to_json(a));
    EXPECT_EQ(back.config, a.config);
    EXPECT_EQ(back.records, a.records);

    const auto rows = csv_rows(a.config, a.records);
    const auto rebuilt = artifacts_from_csv(rows);
    ASSERT_EQ(rebuilt.size(), 1U);
    EXPECT_FALSE(rebuilt[0].config_complete);
    EXPECT_EQ(rebuilt[0].config.strategy, a.config.strategy);
    EXPECT_EQ(rebuilt[0].records, a.records);
    EXPECT_EQ(rebuilt[0].config.repeats, 2U);
}

TEST(PlotData, EmptyReport) {
    EXPECT_EQ(json::parse(emit_plot_data(ComparisonReport{})), (json{{"series", json::array()}}));
}

TEST(PlotData, ThreadSeries) {
    const RunArtifact base = synthetic_artifact("base", Strategy::sequential_online(), {4000});
    const std::vector<RunArtifact> variants{synthetic_artifact("t2", Strategy::thread_map_reduce(2), {2500}),
                                            synthetic_artifact("t4", Strategy::thread_map_reduce(4), {1600})};
    const json plot = json::parse(emit_plot_data(compare_runs(base, variants)));
    const auto& series = plot.at("series");
    const auto it = std::find_if(series.begin(), series.end(),
                                 [](const json& s) { return s.at("name") == "speedup_vs_threads/thread_map_reduce"; });
    ASSERT_NE(it, series.end());
    EXPECT_EQ((*it).at("points"), json::parse("[[2.0, 1.6], [4.0, 2.5]]"));
}

}  // namespace
}  // namespace mlpbench
