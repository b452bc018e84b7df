#pragma once

#include <stdexcept>

namespace napsim {

/// Invalid parameter values or combinations. The CLI maps this to exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unreadable or malformed input files. The CLI maps this to exit code 3.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numerical iteration failed to converge.
struct solve_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace napsim
