#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "mlpbench/harness.hpp"

namespace mlpbench {

/// Flag overrides keyed by config key, values as typed on the command line
/// (e.g. {"epochs", "100"}, {"layer_widths", "16,32,1"}).
using FlagOverrides = std::map<std::string, std::string>;

/// Builds a validated BenchConfig from a flat JSON object plus flag overrides (flags win).
///
/// Recognised keys: run_id, strategy, activation, loss, layer_widths, learning_rate, seed,
/// data_seed, n_samples, epochs, repeats, warmup_repeats, batch_size, threads. Missing keys take
/// the defaults (epochs 1000, repeats 4, warmup 1, widths [16,32,1], ReLU, MSE, lr 0.05,
/// 256 samples). batch_vectorized without batch_size runs full batch; threaded strategies
/// without threads use 4. Throws ConfigError naming the key for anything invalid.
[[nodiscard]] BenchConfig parse_config(const nlohmann::json& doc, const FlagOverrides& flags = {});

/// Reads `path` (if given; an empty file counts as `{}`) and applies parse_config.
[[nodiscard]] BenchConfig load_config(const std::optional<std::filesystem::path>& path,
                                      const FlagOverrides& flags = {});

[[nodiscard]] nlohmann::json config_to_json(const BenchConfig& config);

[[nodiscard]] StrategyKind parse_strategy_kind(const std::string& name);
[[nodiscard]] ActivationKind parse_activation(const std::string& name);
[[nodiscard]] LossKind parse_loss(const std::string& name);
[[nodiscard]] Phase parse_phase(const std::string& name);

}  // namespace mlpbench
