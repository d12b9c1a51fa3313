#pragma once
#include <stdexcept>
#include <string>

namespace critwin {

// Numeric routines fail loudly, carrying the best value/bound achieved so
// callers (and the CLI error record) can report what was reached.
struct NumericError : std::runtime_error {
    NumericError(const std::string& msg, double value, double bound)
        : std::runtime_error(msg), best_value(value), best_bound(bound) {}
    double best_value;
    double best_bound;
};

struct PrecisionUnachievable : NumericError {
    using NumericError::NumericError;
};

struct BracketNotConverged : NumericError {
    BracketNotConverged(const std::string& msg, double lo, double hi)
        : NumericError(msg, 0.5 * (lo + hi), 0.5 * (hi - lo)), lower(lo), upper(hi) {}
    double lower;
    double upper;
};

} // namespace critwin
