#pragma once

#include <stdexcept>
#include <string>

namespace relaxkit {

/// Invalid parameters or malformed input. Maps to CLI exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical method failed to meet its accuracy contract (series did not
/// converge, inversion oscillated, quadrature did not settle). Maps to CLI
/// exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw InputError(what);
}

inline void require_finite(double v, const char* name) {
    if (!(v - v == 0.0)) throw InputError(std::string(name) + " must be finite");
}

}  // namespace detail
}  // namespace relaxkit
