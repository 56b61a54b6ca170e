#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mlpbench/matrix.hpp"

namespace mlpbench {

enum class ActivationKind { ReLU, Sigmoid };

/// MSE pairs with a linear output layer, BCE with a sigmoid output layer.
enum class LossKind { MSE, BCE };

[[nodiscard]] std::string_view to_string(ActivationKind kind) noexcept;
[[nodiscard]] std::string_view to_string(LossKind kind) noexcept;

struct NetworkConfig {
    std::vector<std::size_t> layer_widths{16, 32, 1};
    ActivationKind activation = ActivationKind::ReLU;
    LossKind loss = LossKind::MSE;
    double learning_rate = 0.05;
    std::uint64_t seed = 42;

    [[nodiscard]] std::size_t layer_count() const noexcept { return layer_widths.size() - 1; }
    [[nodiscard]] std::size_t input_width() const noexcept { return layer_widths.front(); }
    [[nodiscard]] std::size_t output_width() const noexcept { return layer_widths.back(); }

    /// Throws ConfigError naming the offending key.
    void validate() const;

    friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// Weights are fan_in x fan_out, biases 1 x fan_out.
struct Layer {
    Matrix weights;
    Matrix biases;

    friend bool operator==(const Layer&, const Layer&) = default;
};

struct Params {
    std::vector<Layer> layers;

    friend bool operator==(const Params&, const Params&) = default;
};

/// Same layout as Params.
using Grads = Params;

/// Pre-activations and activations of one forward pass. activations[0] is the input batch,
/// pre_activations[l] / activations[l + 1] belong to layer l.
struct ForwardCache {
    std::vector<Matrix> pre_activations;
    std::vector<Matrix> activations;

    [[nodiscard]] const Matrix& output() const noexcept { return activations.back(); }
};

/// Weights uniform in [-0.5, 0.5) from SplitMix64(config.seed), layer by layer, row-major; biases zero.
[[nodiscard]] Params init_params(const NetworkConfig& config);

[[nodiscard]] Matrix activate(ActivationKind kind, const Matrix& z);

/// ReLU'(0) is 0.
[[nodiscard]] Matrix activate_deriv(ActivationKind kind, const Matrix& z);

/// MSE = Σ(pred - target)² / (2N), BCE = -Σ[t ln p + (1 - t) ln(1 - p)] / N, with N = pred.rows().
[[nodiscard]] double loss_value(LossKind kind, const Matrix& pred, const Matrix& target);

/// (pred - target) / N for both kinds. For BCE this is the gradient at the output
/// pre-activation (the sigmoid is folded in).
[[nodiscard]] Matrix loss_grad(LossKind kind, const Matrix& pred, const Matrix& target);

/// (pred - target) / divisor with no domain checks; loss_grad is this with divisor = N.
[[nodiscard]] Matrix output_delta(const Matrix& pred, const Matrix& target, double divisor);

/// Σ over entries of the unnormalised per-entry loss (½(p - t)² or the BCE term). Non-finite
/// rather than throwing when BCE predictions saturate.
[[nodiscard]] double loss_sum(LossKind kind, const Matrix& pred, const Matrix& target);

[[nodiscard]] ForwardCache forward(const Params& params, const Matrix& input, const NetworkConfig& config);

/// Batch-mean gradient of the loss with respect to every parameter.
[[nodiscard]] Grads backward(const Params& params, const ForwardCache& cache, const Matrix& target,
                             const NetworkConfig& config);

/// Backpropagates an explicit output-layer delta (gradient at the final pre-activation).
/// `backward` is this with delta = loss_grad(...).
[[nodiscard]] Grads backward_from_delta(const Params& params, const ForwardCache& cache, Matrix delta,
                                        const NetworkConfig& config);

[[nodiscard]] Params apply_update(Params params, const Grads& grads, double learning_rate);
void apply_update_in_place(Params& params, const Grads& grads, double learning_rate);

/// Zero-valued Params with the shapes of `like`.
[[nodiscard]] Params zeros_like(const Params& like);

/// acc += other, parameter by parameter.
void accumulate(Params& acc, const Params& other);

/// Folds the `count`-th sample into a running mean: mean += (sample - mean) / count.
/// Averaging identical params this way returns them unchanged, bit for bit.
void running_mean_update(Params& mean, const Params& sample, std::size_t count);

/// Divides every parameter by `divisor`.
void divide_in_place(Params& params, double divisor);

[[nodiscard]] double max_abs_diff(const Params& a, const Params& b);

[[nodiscard]] bool all_finite(const Params& params);

}  // namespace mlpbench
