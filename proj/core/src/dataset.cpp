#include "mlpbench/dataset.hpp"

#include <algorithm>
#include <vector>

#include "mlpbench/errors.hpp"
#include "mlpbench/splitmix64.hpp"

namespace mlpbench {

TrainingSet make_dataset(std::size_t n, const NetworkConfig& config, std::uint64_t data_seed) {
    if (n == 0) throw ConfigError("n_samples", "must be at least 1");
    if (config.layer_widths.size() < 2) throw ConfigError("layer_widths", "need at least two widths");

    SplitMix64 rng(data_seed);
    Matrix inputs(n, config.input_width());
    for (double& v : inputs.data()) v = rng.next_uniform(-1.0, 1.0);

    NetworkConfig teacher_config = config;
    teacher_config.seed = data_seed + 1;
    const Params teacher = init_params(teacher_config);
    Matrix targets = forward(teacher, inputs, teacher_config).output();

    if (config.loss == LossKind::BCE) {
        std::vector<double> column(n);
        for (std::size_t j = 0; j < targets.cols(); ++j) {
            for (std::size_t i = 0; i < n; ++i) column[i] = targets(i, j);
            std::sort(column.begin(), column.end());
            const double median = (column[(n - 1) / 2] + column[n / 2]) / 2.0;
            for (std::size_t i = 0; i < n; ++i) targets(i, j) = targets(i, j) > median ? 1.0 : 0.0;
        }
    }
    return TrainingSet{std::move(inputs), std::move(targets), data_seed};
}

}  // namespace mlpbench
