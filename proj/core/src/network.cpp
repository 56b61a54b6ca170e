#include "mlpbench/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mlpbench/errors.hpp"
#include "mlpbench/splitmix64.hpp"

namespace mlpbench {

namespace {

double sigmoid(double z) noexcept { return 1.0 / (1.0 + std::exp(-z)); }

void require_same_shape(const Matrix& pred, const Matrix& target, const char* op) {
    if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
        throw ShapeError(std::string(op) + ": prediction " + pred.shape_string() + " vs target " +
                         target.shape_string());
    }
}

}  // namespace

std::string_view to_string(ActivationKind kind) noexcept {
    return kind == ActivationKind::ReLU ? "relu" : "sigmoid";
}

std::string_view to_string(LossKind kind) noexcept { return kind == LossKind::MSE ? "mse" : "bce"; }

void NetworkConfig::validate() const {
    if (layer_widths.size() < 2) {
        throw ConfigError("layer_widths", "need at least an input and an output width");
    }
    for (const std::size_t w : layer_widths) {
        if (w == 0) throw ConfigError("layer_widths", "every width must be at least 1");
    }
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("learning_rate", "must be a positive finite number");
    }
}

Params init_params(const NetworkConfig& config) {
    if (config.layer_widths.size() < 2) throw ConfigError("layer_widths", "need at least two widths");
    SplitMix64 rng(config.seed);
    Params params;
    params.layers.reserve(config.layer_count());
    for (std::size_t l = 0; l < config.layer_count(); ++l) {
        const std::size_t fan_in = config.layer_widths[l];
        const std::size_t fan_out = config.layer_widths[l + 1];
        Matrix w(fan_in, fan_out);
        for (double& v : w.data()) v = rng.next_uniform(-0.5, 0.5);
        params.layers.push_back({std::move(w), Matrix(1, fan_out)});
    }
    return params;
}

Matrix activate(ActivationKind kind, const Matrix& z) {
    Matrix out = z;
    if (kind == ActivationKind::ReLU) {
        for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
    } else {
        for (double& v : out.data()) v = sigmoid(v);
    }
    return out;
}

Matrix activate_deriv(ActivationKind kind, const Matrix& z) {
    Matrix out = z;
    if (kind == ActivationKind::ReLU) {
        for (double& v : out.data()) v = v > 0.0 ? 1.0 : 0.0;
    } else {
        for (double& v : out.data()) {
            const double s = sigmoid(v);
            v = s * (1.0 - s);
        }
    }
    return out;
}

double loss_value(LossKind kind, const Matrix& pred, const Matrix& target) {
    require_same_shape(pred, target, "loss_value");
    const auto p = pred.data();
    const auto t = target.data();
    double acc = 0.0;
    if (kind == LossKind::MSE) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double d = p[i] - t[i];
            acc += d * d;
        }
        return acc / (2.0 * static_cast<double>(pred.rows()));
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > 0.0 && p[i] < 1.0)) {
            throw DomainError("loss_value: BCE prediction " + std::to_string(p[i]) + " outside (0, 1)");
        }
        acc += t[i] * std::log(p[i]) + (1.0 - t[i]) * std::log(1.0 - p[i]);
    }
    return -acc / static_cast<double>(pred.rows());
}

Matrix loss_grad(LossKind kind, const Matrix& pred, const Matrix& target) {
    require_same_shape(pred, target, "loss_grad");
    if (kind == LossKind::BCE) {
        for (const double v : pred.data()) {
            if (!(v > 0.0 && v < 1.0)) {
                throw DomainError("loss_grad: BCE prediction " + std::to_string(v) + " outside (0, 1)");
            }
        }
    }
    return output_delta(pred, target, static_cast<double>(pred.rows()));
}

Matrix output_delta(const Matrix& pred, const Matrix& target, double divisor) {
    require_same_shape(pred, target, "output_delta");
    Matrix g = pred;
    auto pg = g.data();
    const auto t = target.data();
    for (std::size_t i = 0; i < pg.size(); ++i) pg[i] = (pg[i] - t[i]) / divisor;
    return g;
}

double loss_sum(LossKind kind, const Matrix& pred, const Matrix& target) {
    require_same_shape(pred, target, "loss_sum");
    const auto p = pred.data();
    const auto t = target.data();
    double acc = 0.0;
    if (kind == LossKind::MSE) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double d = p[i] - t[i];
            acc += 0.5 * d * d;
        }
        return acc;
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc -= t[i] * std::log(p[i]) + (1.0 - t[i]) * std::log(1.0 - p[i]);
    }
    return acc;
}

ForwardCache forward(const Params& params, const Matrix& input, const NetworkConfig& config) {
    if (input.cols() != config.input_width()) {
        throw ShapeError("forward: input " + input.shape_string() + " does not match input width " +
                         std::to_string(config.input_width()));
    }
    if (params.layers.size() != config.layer_count()) {
        throw ShapeError("forward: params have " + std::to_string(params.layers.size()) + " layers, config " +
                         std::to_string(config.layer_count()));
    }
    ForwardCache cache;
    cache.pre_activations.reserve(params.layers.size());
    cache.activations.reserve(params.layers.size() + 1);
    cache.activations.push_back(input);
    const std::size_t last = params.layers.size() - 1;
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const Layer& layer = params.layers[l];
        Matrix z = mat_mul(cache.activations.back(), layer.weights);
        add_row_broadcast(z, layer.biases);
        Matrix a = l < last ? activate(config.activation, z)
                            : (config.loss == LossKind::BCE ? activate(ActivationKind::Sigmoid, z) : z);
        cache.pre_activations.push_back(std::move(z));
        cache.activations.push_back(std::move(a));
    }
    return cache;
}

Grads backward_from_delta(const Params& params, const ForwardCache& cache, Matrix delta,
                          const NetworkConfig& config) {
    const std::size_t layers = params.layers.size();
    if (cache.pre_activations.size() != layers || cache.activations.size() != layers + 1) {
        throw ShapeError("backward: cache does not match parameter layer count");
    }
    const Matrix& out = cache.output();
    if (delta.rows() != out.rows() || delta.cols() != out.cols()) {
        throw ShapeError("backward: delta " + delta.shape_string() + " vs output " + out.shape_string());
    }
    Grads grads;
    grads.layers.resize(layers, Layer{Matrix(1, 1), Matrix(1, 1)});
    for (std::size_t l = layers; l-- > 0;) {
        grads.layers[l].weights = mat_mul_at_b(cache.activations[l], delta);
        grads.layers[l].biases = col_sum(delta);
        if (l > 0) {
            Matrix upstream = mat_mul_a_bt(delta, params.layers[l].weights);
            delta = hadamard(upstream, activate_deriv(config.activation, cache.pre_activations[l - 1]));
        }
    }
    return grads;
}

Grads backward(const Params& params, const ForwardCache& cache, const Matrix& target, const NetworkConfig& config) {
    return backward_from_delta(params, cache, loss_grad(config.loss, cache.output(), target), config);
}

void apply_update_in_place(Params& params, const Grads& grads, double learning_rate) {
    if (params.layers.size() != grads.layers.size()) {
        throw ShapeError("apply_update: layer count mismatch");
    }
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        subtract_scaled(params.layers[l].weights, learning_rate, grads.layers[l].weights);
        subtract_scaled(params.layers[l].biases, learning_rate, grads.layers[l].biases);
    }
}

Params apply_update(Params params, const Grads& grads, double learning_rate) {
    apply_update_in_place(params, grads, learning_rate);
    return params;
}

Params zeros_like(const Params& like) {
    Params out;
    out.layers.reserve(like.layers.size());
    for (const Layer& layer : like.layers) {
        out.layers.push_back({Matrix(layer.weights.rows(), layer.weights.cols()),
                              Matrix(layer.biases.rows(), layer.biases.cols())});
    }
    return out;
}

void accumulate(Params& acc, const Params& other) {
    if (acc.layers.size() != other.layers.size()) throw ShapeError("accumulate: layer count mismatch");
    for (std::size_t l = 0; l < acc.layers.size(); ++l) {
        add_in_place(acc.layers[l].weights, other.layers[l].weights);
        add_in_place(acc.layers[l].biases, other.layers[l].biases);
    }
}

void running_mean_update(Params& mean, const Params& sample, std::size_t count) {
    if (mean.layers.size() != sample.layers.size()) throw ShapeError("running_mean_update: layer count mismatch");
    const double k = static_cast<double>(count);
    auto fold = [k](Matrix& m, const Matrix& x) {
        if (m.rows() != x.rows() || m.cols() != x.cols()) throw ShapeError("running_mean_update: shape mismatch");
        auto pm = m.data();
        const auto px = x.data();
        for (std::size_t i = 0; i < pm.size(); ++i) pm[i] += (px[i] - pm[i]) / k;
    };
    for (std::size_t l = 0; l < mean.layers.size(); ++l) {
        fold(mean.layers[l].weights, sample.layers[l].weights);
        fold(mean.layers[l].biases, sample.layers[l].biases);
    }
}

void divide_in_place(Params& params, double divisor) {
    for (Layer& layer : params.layers) {
        for (double& v : layer.weights.data()) v /= divisor;
        for (double& v : layer.biases.data()) v /= divisor;
    }
}

double max_abs_diff(const Params& a, const Params& b) {
    if (a.layers.size() != b.layers.size()) throw ShapeError("max_abs_diff: layer count mismatch");
    double worst = 0.0;
    for (std::size_t l = 0; l < a.layers.size(); ++l) {
        worst = std::max(worst, max_abs_diff(a.layers[l].weights, b.layers[l].weights));
        worst = std::max(worst, max_abs_diff(a.layers[l].biases, b.layers[l].biases));
    }
    return worst;
}

bool all_finite(const Params& params) {
    for (const Layer& layer : params.layers) {
        for (const double v : layer.weights.data())
            if (!std::isfinite(v)) return false;
        for (const double v : layer.biases.data())
            if (!std::isfinite(v)) return false;
    }
    return true;
}

}  // namespace mlpbench
