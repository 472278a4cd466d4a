#ifndef SORKIN_ERRORS_HPP
#define SORKIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sorkin {

// Invalid or inconsistent user-supplied configuration. CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Detection probabilities left the valid range (per-pulse total above 1).
// A configuration problem in disguise, so it maps to the same CLI exit code.
struct CalibrationError : ConfigError {
    explicit CalibrationError(const std::string& msg) : ConfigError(msg) {}
};

// Numerical failure (quadrature non-convergence, degenerate fits). CLI exit code 3.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace sorkin

#endif
