#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace magphon {

/// Invalid parameters or malformed configuration input.
///
/// `field()` names the violated invariant, e.g. "OscillatorMode.gamma" or a
/// config key; it is empty when the failure is not tied to one field.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what, std::string field = {})
        : std::invalid_argument(what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A numerical routine could not produce a trustworthy result
/// (near-singular system, step-size underflow, ...).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace magphon
