#include "mlpbench/report/compare.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "mlpbench/dataset.hpp"
#include "mlpbench/errors.hpp"
#include "mlpbench/params_io.hpp"
#include "mlpbench/report/config.hpp"

namespace mlpbench {

namespace {

using nlohmann::json;

std::optional<double> full_batch_loss(const Params& params, const TrainingSet& data, const NetworkConfig& network) {
    try {
        return loss_value(network.loss, forward(params, data.inputs, network).output(), data.targets);
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

RunTimes run_times(const RunArtifact& artifact) {
    RunTimes times;
    times.run_id = artifact.config.run_id;
    times.strategy = artifact.config.strategy;
    times.activation = artifact.config.network.activation;
    const double epochs = static_cast<double>(artifact.config.epochs);
    for (const Phase phase : kAllPhases) {
        const auto it = artifact.summary.find({artifact.config.run_id, phase});
        if (it == artifact.summary.end()) {
            throw ComparisonError("run '" + artifact.config.run_id + "' has no " + std::string(to_string(phase)) +
                                  " records");
        }
        times.min_ns_per_epoch[phase] = static_cast<double>(it->second.min_ns) / epochs;
        times.mean_ns_per_epoch[phase] = it->second.mean_ns / epochs;
    }
    return times;
}

void require_compatible(const RunArtifact& baseline, const RunArtifact& other) {
    const BenchConfig& a = baseline.config;
    const BenchConfig& b = other.config;
    const std::string who = "'" + b.run_id + "' vs baseline '" + a.run_id + "': ";
    if (a.network.loss != b.network.loss) throw ComparisonError(who + "loss kinds differ");
    if (!baseline.config_complete || !other.config_complete) return;
    if (a.network.layer_widths != b.network.layer_widths) throw ComparisonError(who + "layer widths differ");
    if (a.data_seed != b.data_seed) throw ComparisonError(who + "data seeds differ");
    if (a.n_samples != b.n_samples) throw ComparisonError(who + "sample counts differ");
}

std::map<Phase, double> phase_speedups(const RunTimes& baseline, const RunTimes& variant) {
    std::map<Phase, double> out;
    for (const Phase phase : kAllPhases) {
        const double base = baseline.min_ns_per_epoch.at(phase);
        const double var = variant.min_ns_per_epoch.at(phase);
        if (base > 0.0 && var > 0.0) out[phase] = speedup(base, var);
    }
    return out;
}

json phase_map_to_json(const std::map<Phase, double>& values) {
    json out = json::object();
    for (const auto& [phase, v] : values) out[std::string(to_string(phase))] = v;
    return out;
}

std::map<Phase, double> phase_map_from_json(const json& doc) {
    std::map<Phase, double> out;
    for (const auto& [key, v] : doc.items()) out[parse_phase(key)] = v.get<double>();
    return out;
}

json strategy_to_json(const Strategy& s) {
    json out = {{"kind", std::string(to_string(s.kind))}};
    out["batch_size"] = s.batch_size ? json(*s.batch_size) : json(nullptr);
    out["threads"] = s.threads ? json(*s.threads) : json(nullptr);
    return out;
}

Strategy strategy_from_json(const json& doc) {
    Strategy s{parse_strategy_kind(doc.at("kind").get<std::string>()), {}, {}};
    if (doc.contains("batch_size") && !doc.at("batch_size").is_null()) s.batch_size = doc.at("batch_size").get<std::size_t>();
    if (doc.contains("threads") && !doc.at("threads").is_null()) s.threads = doc.at("threads").get<std::size_t>();
    return s;
}

json series(const std::string& name, const std::string& x_label, const std::string& y_label, const json& points) {
    return {{"name", name}, {"x_label", x_label}, {"y_label", y_label}, {"points", points}};
}

}  // namespace

RunArtifact make_artifact(const BenchConfig& config, const BenchOutcome& outcome) {
    RunArtifact artifact;
    artifact.config = config;
    artifact.records = outcome.records;
    artifact.summary = summarize(outcome.records);
    artifact.params_digest = params_digest(outcome.final_params);
    const TrainingSet data = make_dataset(config.n_samples, config.network, config.data_seed);
    artifact.initial_loss = full_batch_loss(init_params(config.network), data, config.network);
    artifact.final_loss = full_batch_loss(outcome.final_params, data, config.network);
    return artifact;
}

std::vector<RunArtifact> artifacts_from_csv(std::span<const CsvRow> rows) {
    std::vector<RunArtifact> out;
    std::map<std::string, std::size_t> index;
    for (const CsvRow& row : rows) {
        auto [it, inserted] = index.emplace(row.run_id, out.size());
        if (inserted) {
            RunArtifact artifact;
            artifact.config_complete = false;
            artifact.config.run_id = row.run_id;
            artifact.config.strategy = Strategy{row.strategy, row.batch_size, row.threads};
            artifact.config.network.activation = row.activation;
            artifact.config.network.loss = row.loss;
            artifact.config.epochs = row.epochs;
            out.push_back(std::move(artifact));
        }
        RunArtifact& artifact = out[it->second];
        const BenchConfig& c = artifact.config;
        if (c.strategy != Strategy{row.strategy, row.batch_size, row.threads} || c.network.activation != row.activation ||
            c.network.loss != row.loss || c.epochs != row.epochs) {
            throw UsageError("csv: rows of run '" + row.run_id + "' disagree on run parameters");
        }
        artifact.records.push_back(row.record());
    }
    for (RunArtifact& artifact : out) {
        std::set<std::size_t> repeats;
        for (const auto& r : artifact.records) repeats.insert(r.repeat_index);
        artifact.config.repeats = repeats.size();
        artifact.summary = summarize(artifact.records);
    }
    return out;
}

json artifact_to_json(const RunArtifact& artifact) {
    json records = json::array();
    for (const TimingRecord& r : artifact.records) {
        records.push_back({{"repeat", r.repeat_index}, {"phase", std::string(to_string(r.phase))}, {"wall_ns", r.wall_ns}});
    }
    json summary = json::object();
    for (const auto& [key, stats] : artifact.summary) {
        summary[std::string(to_string(key.phase))] = {{"mean_ns", stats.mean_ns},
                                                      {"min_ns", stats.min_ns},
                                                      {"max_ns", stats.max_ns},
                                                      {"stddev_ns", stats.stddev_ns},
                                                      {"count", stats.count}};
    }
    json doc = {{"config", config_to_json(artifact.config)},
                {"config_complete", artifact.config_complete},
                {"records", records},
                {"summary", summary}};
    if (artifact.params_digest) {
        char hex[17];
        std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(*artifact.params_digest));
        doc["params_digest"] = hex;
    }
    if (artifact.initial_loss) doc["initial_loss"] = *artifact.initial_loss;
    if (artifact.final_loss) doc["final_loss"] = *artifact.final_loss;
    return doc;
}

RunArtifact artifact_from_json(const json& doc) {
    try {
        RunArtifact artifact;
        artifact.config = parse_config(doc.at("config"));
        artifact.config_complete = doc.value("config_complete", true);
        for (const json& r : doc.at("records")) {
            artifact.records.push_back({artifact.config.run_id, r.at("repeat").get<std::size_t>(),
                                        parse_phase(r.at("phase").get<std::string>()), r.at("wall_ns").get<std::int64_t>()});
        }
        artifact.summary = summarize(artifact.records);
        if (doc.contains("params_digest")) {
            artifact.params_digest = std::stoull(doc.at("params_digest").get<std::string>(), nullptr, 16);
        }
        if (doc.contains("initial_loss")) artifact.initial_loss = doc.at("initial_loss").get<double>();
        if (doc.contains("final_loss")) artifact.final_loss = doc.at("final_loss").get<double>();
        return artifact;
    } catch (const json::exception& e) {
        throw UsageError(std::string("malformed run artifact: ") + e.what());
    }
}

std::string strategy_label(const Strategy& strategy) {
    std::string label(to_string(strategy.kind));
    if (strategy.batch_size) label += "(b=" + std::to_string(*strategy.batch_size) + ")";
    if (strategy.threads) label += "(t=" + std::to_string(*strategy.threads) + ")";
    return label;
}

ComparisonReport compare_runs(const RunArtifact& baseline, std::span<const RunArtifact> variants,
                              double knee_threshold) {
    for (const RunArtifact& v : variants) require_compatible(baseline, v);

    ComparisonReport report;
    report.baseline_run_id = baseline.config.run_id;
    report.runs.push_back(run_times(baseline));

    for (const RunArtifact& artifact : variants) {
        report.runs.push_back(run_times(artifact));
        const RunTimes& times = report.runs.back();
        VariantComparison cmp;
        cmp.run_id = times.run_id;
        cmp.strategy = times.strategy;
        cmp.activation = times.activation;
        cmp.speedup = phase_speedups(report.runs.front(), times);
        const auto threads = artifact.config.strategy.threads;
        if (threads && *threads > 1 && cmp.speedup.contains(Phase::Total)) {
            try {
                cmp.amdahl = fit_amdahl(cmp.speedup.at(Phase::Total), static_cast<double>(*threads));
            } catch (const DomainError& e) {
                cmp.amdahl_note = e.what();
            }
        }
        report.variants.push_back(std::move(cmp));
    }

    // Knee over the batch-size family: total speedup should double with the batch size while the
    // stacked batch still fits.
    std::map<std::size_t, double> by_batch;
    for (const VariantComparison& v : report.variants) {
        if (v.strategy.kind == StrategyKind::BatchVectorized && v.speedup.contains(Phase::Total)) {
            by_batch.emplace(*v.strategy.batch_size, v.speedup.at(Phase::Total));
        }
    }
    if (by_batch.size() >= 3) {
        std::vector<KneePoint> points;
        for (const auto& [b, s] : by_batch) points.push_back({static_cast<double>(b), s});
        report.knee = detect_knee(points, knee_threshold);
    }

    std::map<std::string, std::pair<const RunTimes*, const RunTimes*>> pairs;
    std::vector<std::string> order;
    for (const RunTimes& run : report.runs) {
        const std::string label = strategy_label(run.strategy);
        auto [it, inserted] = pairs.try_emplace(label, nullptr, nullptr);
        if (inserted) order.push_back(label);
        auto& slot = run.activation == ActivationKind::ReLU ? it->second.first : it->second.second;
        if (slot == nullptr) slot = &run;
    }
    for (const std::string& label : order) {
        const auto [relu, sigmoid] = pairs.at(label);
        if (relu == nullptr || sigmoid == nullptr) continue;
        ActivationRow row;
        row.strategy_label = label;
        row.relu_run_id = relu->run_id;
        row.sigmoid_run_id = sigmoid->run_id;
        row.relu_ns = relu->min_ns_per_epoch;
        row.sigmoid_ns = sigmoid->min_ns_per_epoch;
        for (const Phase phase : kAllPhases) {
            const double s = sigmoid->min_ns_per_epoch.at(phase);
            if (s > 0.0) row.relu_over_sigmoid[phase] = relu->min_ns_per_epoch.at(phase) / s;
        }
        report.activation_table.push_back(std::move(row));
    }
    return report;
}

json report_to_json(const ComparisonReport& report) {
    json runs = json::array();
    for (const RunTimes& r : report.runs) {
        runs.push_back({{"run_id", r.run_id},
                        {"strategy", strategy_to_json(r.strategy)},
                        {"activation", std::string(to_string(r.activation))},
                        {"min_ns_per_epoch", phase_map_to_json(r.min_ns_per_epoch)},
                        {"mean_ns_per_epoch", phase_map_to_json(r.mean_ns_per_epoch)}});
    }
    json variants = json::array();
    for (const VariantComparison& v : report.variants) {
        json entry = {{"run_id", v.run_id},
                      {"strategy", strategy_to_json(v.strategy)},
                      {"activation", std::string(to_string(v.activation))},
                      {"speedup", phase_map_to_json(v.speedup)}};
        entry["amdahl"] = v.amdahl ? json{{"p", v.amdahl->p}, {"s", v.amdahl->s}, {"S", v.amdahl->S}} : json(nullptr);
        entry["amdahl_note"] = v.amdahl_note ? json(*v.amdahl_note) : json(nullptr);
        variants.push_back(std::move(entry));
    }
    json knee = nullptr;
    if (report.knee) {
        const KneeReport& k = *report.knee;
        json points = json::array();
        for (const KneePoint& p : k.points) points.push_back({p.batch_size, p.value});
        knee = {{"points", points}, {"ratios", k.ratios}, {"threshold", k.threshold}};
        knee["flagged_interval"] =
            k.flagged_interval ? json{k.flagged_interval->lo, k.flagged_interval->hi} : json(nullptr);
        knee["boundary_estimate"] = k.boundary_estimate ? json(*k.boundary_estimate) : json(nullptr);
    }
    json table = json::array();
    for (const ActivationRow& row : report.activation_table) {
        table.push_back({{"strategy", row.strategy_label},
                         {"relu_run_id", row.relu_run_id},
                         {"sigmoid_run_id", row.sigmoid_run_id},
                         {"relu_ns_per_epoch", phase_map_to_json(row.relu_ns)},
                         {"sigmoid_ns_per_epoch", phase_map_to_json(row.sigmoid_ns)},
                         {"relu_over_sigmoid", phase_map_to_json(row.relu_over_sigmoid)}});
    }
    return {{"baseline", report.baseline_run_id},
            {"runs", runs},
            {"variants", variants},
            {"knee", knee},
            {"activation_table", table}};
}

ComparisonReport report_from_json(const json& doc) {
    try {
        ComparisonReport report;
        report.baseline_run_id = doc.value("baseline", std::string());
        for (const json& r : doc.value("runs", json::array())) {
            report.runs.push_back({r.at("run_id").get<std::string>(), strategy_from_json(r.at("strategy")),
                                   parse_activation(r.at("activation").get<std::string>()),
                                   phase_map_from_json(r.at("min_ns_per_epoch")),
                                   phase_map_from_json(r.at("mean_ns_per_epoch"))});
        }
        for (const json& v : doc.value("variants", json::array())) {
            VariantComparison cmp;
            cmp.run_id = v.at("run_id").get<std::string>();
            cmp.strategy = strategy_from_json(v.at("strategy"));
            cmp.activation = parse_activation(v.at("activation").get<std::string>());
            cmp.speedup = phase_map_from_json(v.at("speedup"));
            if (v.contains("amdahl") && !v.at("amdahl").is_null()) {
                const json& a = v.at("amdahl");
                cmp.amdahl = AmdahlFit{a.at("p").get<double>(), a.at("s").get<double>(), a.at("S").get<double>()};
            }
            if (v.contains("amdahl_note") && !v.at("amdahl_note").is_null()) {
                cmp.amdahl_note = v.at("amdahl_note").get<std::string>();
            }
            report.variants.push_back(std::move(cmp));
        }
        if (doc.contains("knee") && !doc.at("knee").is_null()) {
            const json& k = doc.at("knee");
            KneeReport knee;
            for (const json& p : k.at("points")) knee.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
            knee.ratios = k.at("ratios").get<std::vector<double>>();
            knee.threshold = k.at("threshold").get<double>();
            if (!k.at("flagged_interval").is_null()) {
                knee.flagged_interval = KneeInterval{k.at("flagged_interval").at(0).get<double>(),
                                                     k.at("flagged_interval").at(1).get<double>()};
            }
            if (!k.at("boundary_estimate").is_null()) knee.boundary_estimate = k.at("boundary_estimate").get<double>();
            report.knee = std::move(knee);
        }
        for (const json& row : doc.value("activation_table", json::array())) {
            report.activation_table.push_back({row.at("strategy").get<std::string>(),
                                               row.at("relu_run_id").get<std::string>(),
                                               row.at("sigmoid_run_id").get<std::string>(),
                                               phase_map_from_json(row.at("relu_ns_per_epoch")),
                                               phase_map_from_json(row.at("sigmoid_ns_per_epoch")),
                                               phase_map_from_json(row.at("relu_over_sigmoid"))});
        }
        return report;
    } catch (const json::exception& e) {
        throw UsageError(std::string("malformed comparison report: ") + e.what());
    } catch (const ConfigError& e) {
        throw UsageError(std::string("malformed comparison report: ") + e.what());
    }
}

std::string emit_plot_data(const ComparisonReport& report) {
    json all = json::array();
    if (!report.runs.empty()) {
        json labels = json::array();
        for (const RunTimes& r : report.runs) labels.push_back(r.run_id);
        for (const Phase phase : kAllPhases) {
            json points = json::array();
            for (std::size_t i = 0; i < report.runs.size(); ++i) {
                points.push_back({static_cast<double>(i), report.runs[i].min_ns_per_epoch.at(phase)});
            }
            json s = series("phase_ns_" + std::string(to_string(phase)), "configuration", "min ns per epoch", points);
            s["labels"] = labels;
            all.push_back(std::move(s));
        }
    }

    std::map<StrategyKind, json> thread_points;
    for (const VariantComparison& v : report.variants) {
        if (v.strategy.threads && v.speedup.contains(Phase::Total)) {
            thread_points[v.strategy.kind].push_back({static_cast<double>(*v.strategy.threads), v.speedup.at(Phase::Total)});
        }
    }
    for (const auto& [kind, points] : thread_points) {
        all.push_back(series("speedup_vs_threads/" + std::string(to_string(kind)), "threads", "total speedup", points));
    }

    std::map<std::size_t, double> batch_runtime;
    for (const RunTimes& r : report.runs) {
        if (r.strategy.kind == StrategyKind::BatchVectorized && r.run_id != report.baseline_run_id) {
            batch_runtime.emplace(*r.strategy.batch_size, r.min_ns_per_epoch.at(Phase::Total));
        }
    }
    if (!batch_runtime.empty()) {
        json points = json::array();
        for (const auto& [b, ns] : batch_runtime) points.push_back({static_cast<double>(b), ns});
        all.push_back(series("runtime_vs_batch", "batch size", "min ns per epoch", points));
    }
    if (report.knee) {
        json points = json::array();
        for (const KneePoint& p : report.knee->points) points.push_back({p.batch_size, p.value});
        all.push_back(series("speedup_vs_batch", "batch size", "total speedup", points));
        if (report.knee->flagged_interval) {
            const KneeInterval iv = *report.knee->flagged_interval;
            auto value_at = [&](double b) {
                for (const KneePoint& p : report.knee->points)
                    if (p.batch_size == b) return p.value;
                return 0.0;
            };
            all.push_back(series("knee_interval", "batch size", "total speedup",
                                 json::array({json::array({iv.lo, value_at(iv.lo)}), json::array({iv.hi, value_at(iv.hi)})})));
        }
    }
    if (!report.activation_table.empty()) {
        json points = json::array();
        json labels = json::array();
        for (std::size_t i = 0; i < report.activation_table.size(); ++i) {
            const ActivationRow& row = report.activation_table[i];
            labels.push_back(row.strategy_label);
            const auto it = row.relu_over_sigmoid.find(Phase::Total);
            points.push_back({static_cast<double>(i), it == row.relu_over_sigmoid.end() ? 0.0 : it->second});
        }
        json s = series("relu_over_sigmoid_total", "strategy", "relu / sigmoid time", points);
        s["labels"] = labels;
        all.push_back(std::move(s));
    }
    return json{{"series", all}}.dump(2) + "\n";
}

std::string format_report_text(const ComparisonReport& report) {
    std::ostringstream out;
    char line[256];
    out << "baseline: " << report.baseline_run_id << "\n";
    if (!report.variants.empty()) {
        std::snprintf(line, sizeof line, "%-36s %10s %10s %10s %10s  %s\n", "variant", "forward", "backward", "update",
                      "total", "amdahl p");
        out << line;
        for (const VariantComparison& v : report.variants) {
            auto fmt = [&](Phase p) {
                const auto it = v.speedup.find(p);
                return it == v.speedup.end() ? std::string("-") : std::to_string(it->second).substr(0, 6) + "x";
            };
            std::string amdahl = v.amdahl ? std::to_string(v.amdahl->p) : (v.amdahl_note ? "n/a" : "");
            std::snprintf(line, sizeof line, "%-36s %10s %10s %10s %10s  %s\n", v.run_id.c_str(), fmt(Phase::Forward).c_str(),
                          fmt(Phase::Backward).c_str(), fmt(Phase::Update).c_str(), fmt(Phase::Total).c_str(), amdahl.c_str());
            out << line;
        }
    }
    if (report.knee) {
        out << "knee: ";
        if (report.knee->flagged_interval) {
            out << "flagged (" << report.knee->flagged_interval->lo << ", " << report.knee->flagged_interval->hi
                << "), boundary ~" << *report.knee->boundary_estimate << "\n";
        } else {
            out << "none flagged\n";
        }
    }
    if (!report.activation_table.empty()) {
        out << "relu vs sigmoid (min ns per epoch, ratio relu/sigmoid)\n";
        std::snprintf(line, sizeof line, "%-36s %8s %14s %14s %8s %8s %8s\n", "strategy", "", "relu total", "sigmoid total",
                      "fwd", "bwd", "total");
        out << line;
        for (const ActivationRow& row : report.activation_table) {
            auto ratio = [&](Phase p) {
                const auto it = row.relu_over_sigmoid.find(p);
                return it == row.relu_over_sigmoid.end() ? std::string("-") : std::to_string(it->second).substr(0, 5);
            };
            std::snprintf(line, sizeof line, "%-36s %8s %14.0f %14.0f %8s %8s %8s\n", row.strategy_label.c_str(), "",
                          row.relu_ns.at(Phase::Total), row.sigmoid_ns.at(Phase::Total), ratio(Phase::Forward).c_str(),
                          ratio(Phase::Backward).c_str(), ratio(Phase::Total).c_str());
            out << line;
        }
    }
    return out.str();
}

}  // namespace mlpbench
