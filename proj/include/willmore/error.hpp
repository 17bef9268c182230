#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace willmore {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on arguments was violated (bad sizes, bounds, parameters).
class ContractError : public Error {
public:
    using Error::Error;
};

/// A stencil reached outside the grid closure.
class StencilError : public Error {
public:
    StencilError(const std::string& what, int i, int j) : Error(what), i_(i), j_(j) {}
    int i() const noexcept { return i_; }
    int j() const noexcept { return j_; }

private:
    int i_;
    int j_;
};

/// Non-finite values appeared while evaluating the flow.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, double t, int i = -1, int j = -1)
        : Error(what), t_(t), i_(i), j_(j) {}
    double t() const noexcept { return t_; }
    int i() const noexcept { return i_; }
    int j() const noexcept { return j_; }

private:
    double t_;
    int i_;
    int j_;
};

/// The adaptive controller cannot satisfy the tolerance above dt_min.
class StepFailure : public Error {
public:
    StepFailure(const std::string& what, double t) : Error(what), t_(t) {}
    double t() const noexcept { return t_; }

private:
    double t_;
};

/// Invalid run configuration; `key()` names the offending entry.
class ConfigError : public Error {
public:
    ConfigError(const std::string& key, const std::string& what)
        : Error(key + ": " + what), key_(key) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace willmore
