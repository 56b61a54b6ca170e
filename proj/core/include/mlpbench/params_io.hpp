#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mlpbench/network.hpp"

namespace mlpbench {

/// Binary parameter file ("MLPW"), all fields little-endian:
///
///   char[4]  magic "MLPW"
///   u32      layer count L
///   L times: u32 fan_in, u32 fan_out, f64[fan_in * fan_out] weights (row-major), f64[fan_out] biases
[[nodiscard]] std::vector<std::byte> encode_params(const Params& params);

/// Throws ShapeError on truncated input, bad magic or trailing bytes.
[[nodiscard]] Params decode_params(std::span<const std::byte> bytes);

void write_params_file(const std::filesystem::path& path, const Params& params);
[[nodiscard]] Params read_params_file(const std::filesystem::path& path);

/// 64-bit FNV-1a.
[[nodiscard]] std::uint64_t fnv1a64(std::span<const std::byte> bytes) noexcept;

/// FNV-1a of encode_params(params).
[[nodiscard]] std::uint64_t params_digest(const Params& params);

}  // namespace mlpbench
