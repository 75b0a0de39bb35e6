#pragma once

#include <stdexcept>
#include <string>

namespace qecforge {

// Bad user input: unknown scenario, malformed file, invalid flag combination.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A structural invariant of the code lattice (or a caller contract) is violated.
struct InvariantViolation : std::runtime_error {
    explicit InvariantViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// Request exceeds a hard size limit (exact enumeration, census depth).
struct SizeGuardError : std::runtime_error {
    explicit SizeGuardError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace qecforge
