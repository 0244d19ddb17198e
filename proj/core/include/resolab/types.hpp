#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace resolab {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Bad input or violated precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not deliver its contract.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Configuration file problems (missing keys, bad values, missing files).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace resolab
