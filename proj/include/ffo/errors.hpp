#pragma once

#include <stdexcept>
#include <string>

namespace ffo {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A time signal was evaluated outside its domain (tabulated data).
class RangeError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation was violated.
class ContractError : public Error {
public:
    using Error::Error;
};

/// The nu_plus / epsilon reduction hit f(t) ~ 0 or nu_plus ~ 0.
class SingularReductionError : public Error {
public:
    SingularReductionError(const std::string& what, double t)
        : Error(what + " at t=" + std::to_string(t)), t_(t) {}
    double t() const noexcept { return t_; }

private:
    double t_;
};

/// Time stepping produced a non-finite value.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& module, double t)
        : Error(module + ": non-finite state at t=" + std::to_string(t)), module_(module), t_(t) {}
    double t() const noexcept { return t_; }
    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
    double t_;
};

/// Scenario configuration rejected; `path()` names the offending field.
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& message)
        : Error(path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace ffo
