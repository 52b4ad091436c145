#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace polariton {

// Raised when a size cap or numerical sanity check refuses to continue.
class GuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised for malformed or inconsistent run configuration. Carries the key
// that triggered the failure so the CLI can report it verbatim.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& message)
        : std::invalid_argument(message), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

} // namespace polariton
