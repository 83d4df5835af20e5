#pragma once

#include <stdexcept>
#include <string>

namespace pdct {

// Base of every error raised by the core. The C API maps each subclass onto a
// pdct_status code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operands with incompatible dimensions.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Out-of-range or otherwise invalid argument value.
class ParameterError : public Error {
public:
    using Error::Error;
};

// A solver iterate became non-finite.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, int iteration) : Error(what), iteration_(iteration) {}
    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

// Power iteration collapsed onto the null space.
class DegenerateOperatorError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace pdct
