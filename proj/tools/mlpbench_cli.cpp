#include <algorithm>
#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mlpbench/errors.hpp"
#include "mlpbench/params_io.hpp"
#include "mlpbench/report/compare.hpp"
#include "mlpbench/report/config.hpp"
#include "mlpbench/report/csv.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace mlpbench {
namespace {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfig = 2, kDivergence = 3, kComparison = 4 };

constexpr std::array<const char*, 14> kConfigKeys{
    "run_id", "strategy", "activation", "loss", "layer_widths", "learning_rate", "seed",
    "data_seed", "n_samples", "epochs", "repeats", "warmup_repeats", "batch_size", "threads"};

/// --config plus one --<key> option per config key.
struct ConfigOptions {
    std::optional<fs::path> config_path;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;

    void attach(CLI::App& app, std::initializer_list<std::string_view> skip = {}) {
        app.add_option("--config", config_path, "JSON config file");
        for (const char* key : kConfigKeys) {
            if (std::find(skip.begin(), skip.end(), key) != skip.end()) continue;
            options[key] = app.add_option(std::string("--") + key, values[key], std::string("override config key ") + key);
        }
    }

    [[nodiscard]] BenchConfig load() const {
        FlagOverrides flags;
        for (const auto& [key, option] : options) {
            if (option->count() > 0) flags[key] = values.at(key);
        }
        return load_config(config_path, flags);
    }
};

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Runs one config and writes <id>.json, <id>.init.mlpw and <id>.mlpw into `out_dir`.
RunArtifact execute(const BenchConfig& config, const fs::path& out_dir) {
    config.validate();
    std::cerr << "running " << config.run_id << " (" << strategy_label(config.strategy) << ", "
              << to_string(config.network.activation) << ", " << config.epochs << " epochs x " << config.repeats
              << ")\n";
    const BenchOutcome outcome = run_benchmark(config);
    RunArtifact artifact = make_artifact(config, outcome);
    fs::create_directories(out_dir);
    write_params_file(out_dir / (config.run_id + ".init.mlpw"), init_params(config.network));
    write_params_file(out_dir / (config.run_id + ".mlpw"), outcome.final_params);
    write_text(out_dir / (config.run_id + ".json"), artifact_to_json(artifact).dump(2) + "\n");
    return artifact;
}

std::string combined_csv(std::span<const RunArtifact> artifacts) {
    std::vector<CsvRow> rows;
    for (const RunArtifact& a : artifacts) {
        const auto part = csv_rows(a.config, a.records);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    return emit_csv(rows);
}

/// Writes the family CSV and the comparison report, and prints the text rendering.
void finish_family(std::span<const RunArtifact> artifacts, const std::string& name, const fs::path& out_dir) {
    write_text(out_dir / (name + ".csv"), combined_csv(artifacts));
    const ComparisonReport report = compare_runs(artifacts.front(), artifacts.subspan(1));
    write_text(out_dir / (name + ".report.json"), report_to_json(report).dump(2) + "\n");
    std::cout << format_report_text(report);
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t value = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (ec != std::errc{} || ptr != item.data() + item.size() || item.empty() || value == 0) {
            throw ConfigError(key, "expected a comma-separated list of positive integers, got '" + text + "'");
        }
        out.push_back(value);
    }
    if (out.empty()) throw ConfigError(key, "list is empty");
    return out;
}

BenchConfig with_strategy(BenchConfig config, Strategy strategy, const std::string& run_id) {
    config.strategy = strategy;
    config.run_id = run_id;
    return config;
}

BenchConfig baseline_of(const BenchConfig& config) {
    return with_strategy(config, Strategy::sequential_online(), config.run_id + "-sequential");
}

/// Parses --config without the strategy-specific keys so a sweep can set them itself.
BenchConfig load_family_base(const ConfigOptions& options) {
    BenchConfig config = options.load();
    config.strategy = Strategy::sequential_online();
    return config;
}

int cmd_run(const ConfigOptions& options, const fs::path& out_dir) {
    const BenchConfig config = options.load();
    const RunArtifact artifact = execute(config, out_dir);
    write_text(out_dir / (config.run_id + ".csv"), combined_csv(std::span(&artifact, 1)));
    const auto& total = artifact.summary.at(SummaryKey{config.run_id, Phase::Total});
    std::cout << config.run_id << ": total mean " << total.mean_ns / 1e6 << " ms, min " << total.min_ns / 1e6
              << " ms over " << total.count << " repeats; loss " << artifact.initial_loss.value_or(0.0) << " -> "
              << artifact.final_loss.value_or(0.0) << "\n";
    return kOk;
}

int cmd_sweep(const ConfigOptions& options, const std::optional<std::string>& batch_sizes, const fs::path& out_dir) {
    const BenchConfig base = load_family_base(options);
    std::vector<std::size_t> sizes;
    if (batch_sizes) {
        sizes = parse_size_list("batch_sizes", *batch_sizes);
    } else {
        for (std::size_t b = 1; b <= base.n_samples; b *= 2) sizes.push_back(b);
    }
    std::vector<RunArtifact> artifacts{execute(baseline_of(base), out_dir)};
    for (const std::size_t b : sizes) {
        artifacts.push_back(
            execute(with_strategy(base, Strategy::batch_vectorized(b), base.run_id + "-b" + std::to_string(b)), out_dir));
    }
    finish_family(artifacts, base.run_id + "-sweep", out_dir);
    return kOk;
}

int cmd_threads_sweep(const ConfigOptions& options, const std::string& thread_list, const std::string& kind_name,
                      const fs::path& out_dir) {
    const BenchConfig base = load_family_base(options);
    const StrategyKind kind = parse_strategy_kind(kind_name);
    if (kind != StrategyKind::ThreadMapReduce && kind != StrategyKind::ThreadFullPipeline) {
        throw ConfigError("strategy", "threads-sweep needs a threaded strategy, got " + kind_name);
    }
    std::vector<RunArtifact> artifacts{execute(baseline_of(base), out_dir)};
    for (const std::size_t t : parse_size_list("threads", thread_list)) {
        const Strategy strategy =
            kind == StrategyKind::ThreadMapReduce ? Strategy::thread_map_reduce(t) : Strategy::thread_full_pipeline(t);
        artifacts.push_back(execute(with_strategy(base, strategy, base.run_id + "-t" + std::to_string(t)), out_dir));
    }
    finish_family(artifacts, base.run_id + "-threads", out_dir);
    return kOk;
}

int cmd_activation_compare(const ConfigOptions& options, std::size_t batch_size, std::size_t threads,
                           const fs::path& out_dir) {
    const BenchConfig base = load_family_base(options);
    const std::array<std::pair<Strategy, std::string>, 4> strategies{{
        {Strategy::sequential_online(), "seq"},
        {Strategy::batch_vectorized(batch_size == 0 ? base.n_samples : batch_size), "batch"},
        {Strategy::thread_map_reduce(threads), "mapreduce"},
        {Strategy::thread_full_pipeline(threads), "pipeline"},
    }};
    std::vector<RunArtifact> artifacts;
    for (const auto& [strategy, tag] : strategies) {
        for (const ActivationKind act : {ActivationKind::ReLU, ActivationKind::Sigmoid}) {
            BenchConfig c = with_strategy(base, strategy, base.run_id + "-" + tag + "-" + std::string(to_string(act)));
            c.network.activation = act;
            artifacts.push_back(execute(c, out_dir));
        }
    }
    finish_family(artifacts, base.run_id + "-activation", out_dir);
    return kOk;
}

int cmd_analyze(const std::vector<fs::path>& csv_paths, const std::vector<fs::path>& artifact_paths,
                const std::optional<std::string>& baseline_id, double knee_threshold,
                const std::optional<fs::path>& out_path) {
    std::vector<RunArtifact> artifacts;
    for (const fs::path& path : csv_paths) {
        const auto rows = parse_csv(read_text(path));
        for (RunArtifact& a : artifacts_from_csv(rows)) artifacts.push_back(std::move(a));
    }
    for (const fs::path& path : artifact_paths) {
        RunArtifact full = artifact_from_json(json::parse(read_text(path)));
        const auto same = std::find_if(artifacts.begin(), artifacts.end(),
                                       [&](const RunArtifact& a) { return a.config.run_id == full.config.run_id; });
        if (same != artifacts.end()) {
            *same = std::move(full);
        } else {
            artifacts.push_back(std::move(full));
        }
    }
    if (artifacts.empty()) throw UsageError("analyze needs at least one --csv or --artifact input");

    std::size_t base_index = 0;
    if (baseline_id) {
        const auto it = std::find_if(artifacts.begin(), artifacts.end(),
                                     [&](const RunArtifact& a) { return a.config.run_id == *baseline_id; });
        if (it == artifacts.end()) throw UsageError("baseline run '" + *baseline_id + "' not found in inputs");
        base_index = static_cast<std::size_t>(it - artifacts.begin());
    }
    std::rotate(artifacts.begin(), artifacts.begin() + static_cast<std::ptrdiff_t>(base_index),
                artifacts.begin() + static_cast<std::ptrdiff_t>(base_index) + 1);
    const ComparisonReport report =
        compare_runs(artifacts.front(), std::span(artifacts).subspan(1), knee_threshold);
    const std::string doc = report_to_json(report).dump(2) + "\n";
    if (out_path) {
        write_text(*out_path, doc);
        std::cout << format_report_text(report);
    } else {
        std::cout << doc;
    }
    return kOk;
}

int cmd_plot_data(const fs::path& report_path, const std::optional<fs::path>& out_path) {
    const ComparisonReport report = report_from_json(json::parse(read_text(report_path)));
    const std::string doc = emit_plot_data(report);
    if (out_path) {
        write_text(*out_path, doc);
    } else {
        std::cout << doc;
    }
    return kOk;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"MLP training-strategy benchmark"};
    app.require_subcommand(1);

    fs::path out_dir = ".";

    ConfigOptions run_opts;
    auto* run = app.add_subcommand("run", "benchmark one configuration");
    run_opts.attach(*run);
    run->add_option("--out-dir", out_dir, "directory for CSV, params and artifact files");

    ConfigOptions sweep_opts;
    std::optional<std::string> batch_sizes;
    auto* sweep = app.add_subcommand("sweep", "batch_vectorized over a list of batch sizes plus a sequential baseline");
    sweep_opts.attach(*sweep, {"strategy", "batch_size", "threads"});
    sweep->add_option("--batch-sizes", batch_sizes, "comma-separated batch sizes (default: powers of two up to n_samples)");
    sweep->add_option("--out-dir", out_dir, "output directory");

    ConfigOptions threads_opts;
    std::string thread_list = "1,2,4,8";
    std::string thread_kind = "thread_map_reduce";
    auto* threads_sweep =
        app.add_subcommand("threads-sweep", "a threaded strategy over a list of thread counts plus a sequential baseline");
    threads_opts.attach(*threads_sweep, {"strategy", "batch_size", "threads"});
    threads_sweep->add_option("--threads", thread_list, "comma-separated thread counts")->capture_default_str();
    threads_sweep->add_option("--strategy", thread_kind, "thread_map_reduce or thread_full_pipeline")->capture_default_str();
    threads_sweep->add_option("--out-dir", out_dir, "output directory");

    ConfigOptions act_opts;
    std::size_t act_batch = 0;
    std::size_t act_threads = 4;
    auto* activation = app.add_subcommand("activation-compare", "ReLU against Sigmoid under every strategy");
    act_opts.attach(*activation, {"strategy", "activation", "batch_size", "threads"});
    activation->add_option("--batch-size", act_batch, "batch size for batch_vectorized (default: n_samples)");
    activation->add_option("--threads", act_threads, "thread count for threaded strategies")->capture_default_str();
    activation->add_option("--out-dir", out_dir, "output directory");

    std::vector<fs::path> csv_paths;
    std::vector<fs::path> artifact_paths;
    std::optional<std::string> baseline_id;
    double knee_threshold = kDefaultKneeThreshold;
    std::optional<fs::path> report_out;
    auto* analyze = app.add_subcommand("analyze", "timing CSV in, comparison report JSON out");
    analyze->add_option("--csv", csv_paths, "timing CSV (repeatable)");
    analyze->add_option("--artifact", artifact_paths, "run artifact JSON with full config (repeatable)");
    analyze->add_option("--baseline", baseline_id, "baseline run_id (default: first run)");
    analyze->add_option("--knee-threshold", knee_threshold, "ratio below which a batch interval is flagged")
        ->capture_default_str();
    analyze->add_option("-o,--out", report_out, "report path (default: stdout)");

    fs::path plot_report;
    std::optional<fs::path> plot_out;
    auto* plot = app.add_subcommand("plot-data", "comparison report in, plot series JSON out");
    plot->add_option("--report", plot_report, "comparison report JSON")->required();
    plot->add_option("-o,--out", plot_out, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    if (*run) return cmd_run(run_opts, out_dir);
    if (*sweep) return cmd_sweep(sweep_opts, batch_sizes, out_dir);
    if (*threads_sweep) return cmd_threads_sweep(threads_opts, thread_list, thread_kind, out_dir);
    if (*activation) return cmd_activation_compare(act_opts, act_batch, act_threads, out_dir);
    if (*analyze) return cmd_analyze(csv_paths, artifact_paths, baseline_id, knee_threshold, report_out);
    return cmd_plot_data(plot_report, plot_out);
}

}  // namespace
}  // namespace mlpbench

int main(int argc, char** argv) {
    using namespace mlpbench;
    try {
        return run_cli(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return kDivergence;
    } catch (const ComparisonError& e) {
        std::cerr << "comparison error: " << e.what() << "\n";
        return kComparison;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
}
