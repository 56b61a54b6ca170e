#include "mlpbench/report/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "mlpbench/errors.hpp"

namespace mlpbench {

namespace {

using nlohmann::json;

constexpr std::size_t kDefaultThreads = 4;

constexpr std::array<std::string_view, 14> kKeys{
    "run_id", "strategy", "activation", "loss",           "layer_widths", "learning_rate", "seed",
    "data_seed", "n_samples", "epochs", "repeats", "warmup_repeats", "batch_size", "threads"};

bool is_known_key(std::string_view key) {
    return std::find(kKeys.begin(), kKeys.end(), key) != kKeys.end();
}

std::uint64_t parse_u64_text(const std::string& key, std::string_view text) {
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ConfigError(key, "expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return value;
}

/// Converts a command-line string into the JSON type the key expects.
json flag_to_json(const std::string& key, const std::string& text) {
    if (key == "run_id" || key == "strategy" || key == "activation" || key == "loss") return text;
    if (key == "learning_rate") {
        try {
            std::size_t used = 0;
            const double v = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(key, "expected a number, got '" + text + "'");
        }
    }
    if (key == "layer_widths") {
        json widths = json::array();
        std::stringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) widths.push_back(parse_u64_text(key, item));
        return widths;
    }
    return parse_u64_text(key, text);
}

std::uint64_t get_u64(const json& doc, const std::string& key) {
    const json& v = doc.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw ConfigError(key, "expected a non-negative integer, got " + v.dump());
    }
    return v.get<std::uint64_t>();
}

std::size_t get_count(const json& doc, const std::string& key) { return static_cast<std::size_t>(get_u64(doc, key)); }

std::string get_string(const json& doc, const std::string& key) {
    const json& v = doc.at(key);
    if (!v.is_string()) throw ConfigError(key, "expected a string, got " + v.dump());
    return v.get<std::string>();
}

}  // namespace

StrategyKind parse_strategy_kind(const std::string& name) {
    for (const auto kind : {StrategyKind::SequentialOnline, StrategyKind::BatchVectorized, StrategyKind::ThreadMapReduce,
                            StrategyKind::ThreadFullPipeline}) {
        if (name == to_string(kind)) return kind;
    }
    throw ConfigError("strategy", "unknown strategy '" + name + "'");
}

ActivationKind parse_activation(const std::string& name) {
    if (name == "relu") return ActivationKind::ReLU;
    if (name == "sigmoid") return ActivationKind::Sigmoid;
    throw ConfigError("activation", "unknown activation '" + name + "'");
}

LossKind parse_loss(const std::string& name) {
    if (name == "mse") return LossKind::MSE;
    if (name == "bce") return LossKind::BCE;
    throw ConfigError("loss", "unknown loss '" + name + "'");
}

Phase parse_phase(const std::string& name) {
    for (const Phase p : kAllPhases) {
        if (name == to_string(p)) return p;
    }
    throw UsageError("unknown phase '" + name + "'");
}

BenchConfig parse_config(const json& doc, const FlagOverrides& flags) {
    if (!doc.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    json merged = doc;
    for (const auto& [key, text] : flags) {
        if (!is_known_key(key)) throw ConfigError(key, "unknown flag");
        merged[key] = flag_to_json(key, text);
    }
    for (const auto& [key, value] : merged.items()) {
        if (!is_known_key(key)) throw ConfigError(key, "unknown key");
    }

    BenchConfig cfg;
    if (merged.contains("run_id")) cfg.run_id = get_string(merged, "run_id");
    if (merged.contains("activation")) cfg.network.activation = parse_activation(get_string(merged, "activation"));
    if (merged.contains("loss")) cfg.network.loss = parse_loss(get_string(merged, "loss"));
    if (merged.contains("layer_widths")) {
        const json& v = merged.at("layer_widths");
        if (!v.is_array()) throw ConfigError("layer_widths", "expected an array of widths");
        cfg.network.layer_widths.clear();
        for (const json& w : v) {
            if (!w.is_number_unsigned()) throw ConfigError("layer_widths", "widths must be positive integers");
            cfg.network.layer_widths.push_back(w.get<std::size_t>());
        }
    }
    if (merged.contains("learning_rate")) {
        const json& v = merged.at("learning_rate");
        if (!v.is_number()) throw ConfigError("learning_rate", "expected a number, got " + v.dump());
        cfg.network.learning_rate = v.get<double>();
    }
    if (merged.contains("seed")) cfg.network.seed = get_u64(merged, "seed");
    if (merged.contains("data_seed")) cfg.data_seed = get_u64(merged, "data_seed");
    if (merged.contains("n_samples")) cfg.n_samples = get_count(merged, "n_samples");
    if (merged.contains("epochs")) cfg.epochs = get_count(merged, "epochs");
    if (merged.contains("repeats")) cfg.repeats = get_count(merged, "repeats");
    if (merged.contains("warmup_repeats")) cfg.warmup_repeats = get_count(merged, "warmup_repeats");

    const StrategyKind kind =
        merged.contains("strategy") ? parse_strategy_kind(get_string(merged, "strategy")) : StrategyKind::SequentialOnline;
    cfg.strategy = Strategy{kind, {}, {}};
    if (merged.contains("batch_size")) cfg.strategy.batch_size = get_count(merged, "batch_size");
    if (merged.contains("threads")) cfg.strategy.threads = get_count(merged, "threads");
    if (kind == StrategyKind::BatchVectorized && !cfg.strategy.batch_size) cfg.strategy.batch_size = cfg.n_samples;
    if (cfg.strategy.is_threaded() && !cfg.strategy.threads) cfg.strategy.threads = kDefaultThreads;

    cfg.validate();
    return cfg;
}

BenchConfig load_config(const std::optional<std::filesystem::path>& path, const FlagOverrides& flags) {
    json doc = json::object();
    if (path) {
        std::ifstream in(*path);
        if (!in) throw ConfigError("config", "cannot open " + path->string());
        std::stringstream buffer;
        buffer << in.rdbuf();
        const std::string text = buffer.str();
        if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
            try {
                doc = json::parse(text);
            } catch (const json::parse_error& e) {
                throw ConfigError("config", std::string("invalid JSON: ") + e.what());
            }
        }
    }
    return parse_config(doc, flags);
}

json config_to_json(const BenchConfig& config) {
    json doc = {
        {"run_id", config.run_id},
        {"strategy", std::string(to_string(config.strategy.kind))},
        {"activation", std::string(to_string(config.network.activation))},
        {"loss", std::string(to_string(config.network.loss))},
        {"layer_widths", config.network.layer_widths},
        {"learning_rate", config.network.learning_rate},
        {"seed", config.network.seed},
        {"data_seed", config.data_seed},
        {"n_samples", config.n_samples},
        {"epochs", config.epochs},
        {"repeats", config.repeats},
        {"warmup_repeats", config.warmup_repeats},
    };
    if (config.strategy.batch_size) doc["batch_size"] = *config.strategy.batch_size;
    if (config.strategy.threads) doc["threads"] = *config.strategy.threads;
    return doc;
}

}  // namespace mlpbench
