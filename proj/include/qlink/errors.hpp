#pragma once

#include <stdexcept>
#include <string>

namespace qlink {

// Config-file / option parsing problems (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Parameter/domain validation failures (CLI exit code 3).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Runtime simulation failures: livelock, broken engine invariants (CLI exit code 4).
struct SimError : std::runtime_error {
    explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qlink
