#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlpbench {

/// Operand shapes do not satisfy an operation's precondition.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid benchmark or network configuration. `key()` names the offending field.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& message)
        : std::invalid_argument("config error [" + key + "]: " + message), key_(std::move(key)) {}

    [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// A timed run produced a non-finite loss.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(std::size_t epoch)
        : std::runtime_error("numeric divergence: non-finite loss at epoch " + std::to_string(epoch)),
          epoch_(epoch) {}

    [[nodiscard]] std::size_t epoch() const noexcept { return epoch_; }

private:
    std::size_t epoch_;
};

/// Runs that cannot be meaningfully compared (different architecture or data).
class ComparisonError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller violated an input precondition (empty input, too few points, ...).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace mlpbench
