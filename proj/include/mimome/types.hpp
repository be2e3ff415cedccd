#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mimome {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Error hierarchy. Everything thrown by the library derives from Error so
// callers (the CLI in particular) can catch one type and report.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// A channel coefficient that the construction divides by is exactly zero.
/// Probability zero under Rayleigh fading; the harness resamples.
class DegenerateChannelError : public Error {
public:
    using Error::Error;
};

/// Effective channel too ill-conditioned for zero-forcing.
class SingularChannelError : public Error {
public:
    using Error::Error;
};

class InfeasibleSelectionError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Configuration document error; carries the offending key and 1-based line
/// (0 when the line is unknown, e.g. a key that is missing altogether).
class ParseError : public Error {
public:
    ParseError(std::string key, int line, const std::string& what)
        : Error(format(key, line, what)), key_(std::move(key)), line_(line) {}

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    static std::string format(const std::string& key, int line, const std::string& what) {
        std::string s = "config key '" + key + "'";
        if (line > 0) s += " (line " + std::to_string(line) + ")";
        return s + ": " + what;
    }

    std::string key_;
    int line_;
};

} // namespace mimome
