#pragma once

#include <cstddef>
#include <cstdint>

#include "mlpbench/matrix.hpp"
#include "mlpbench/network.hpp"

namespace mlpbench {

struct TrainingSet {
    Matrix inputs;   // N x M
    Matrix targets;  // N x K
    std::uint64_t seed = 0;

    [[nodiscard]] std::size_t size() const noexcept { return inputs.rows(); }

    friend bool operator==(const TrainingSet&, const TrainingSet&) = default;
};

/// Synthetic teacher-student data.
///
/// Inputs are uniform in [-1, 1) drawn row-major from SplitMix64(data_seed). Targets are the outputs
/// of a teacher network with the same architecture initialised from seed data_seed + 1. For BCE the
/// teacher's sigmoid outputs are turned into labels per output column: 1 if strictly above the
/// column median, else 0 (the median of an even count is the mean of the two middle values).
[[nodiscard]] TrainingSet make_dataset(std::size_t n, const NetworkConfig& config, std::uint64_t data_seed);

}  // namespace mlpbench
