#pragma once

#include <stdexcept>
#include <string>

namespace dqpt {

// Every library failure derives from Error so the CLI can map it to an exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A momentum mode with |d(k)| = 0 where a ground state is required.
class GaplessModeError : public Error {
public:
    GaplessModeError(const std::string& what, double k)
        : Error(what), k_(k) {}
    double k() const noexcept { return k_; }

private:
    double k_;
};

class NoDqptError : public Error {
public:
    using Error::Error;
};

class AliasingError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class ResourceGuardError : public Error {
public:
    using Error::Error;
};

class NumericalFailure : public Error {
public:
    NumericalFailure(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace dqpt
