#pragma once

#include <stdexcept>
#include <string>

namespace phyn {

/// Base class for every input-validation failure. The CLI maps these to exit code 2.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct domain_error : validation_error {
    using validation_error::validation_error;
};

/// No-arbitrage band violated on a lattice node.
struct arbitrage_error : validation_error {
    using validation_error::validation_error;
};

/// Explicit finite-difference step exceeds its stability limit.
struct stability_error : validation_error {
    using validation_error::validation_error;
};

struct parameter_error : validation_error {
    using validation_error::validation_error;
};

struct bracket_error : validation_error {
    using validation_error::validation_error;
};

/// Volatility matrix is singular: some direction of risk cannot be hedged.
struct incompleteness_error : validation_error {
    using validation_error::validation_error;
};

struct degeneracy_error : validation_error {
    using validation_error::validation_error;
};

struct unsupported_error : validation_error {
    using validation_error::validation_error;
};

} // namespace phyn
