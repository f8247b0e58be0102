#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace katzrank {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed edge-list or batch input. Carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string &what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Node id outside the graph's universe or the id type.
class RangeError : public Error {
public:
    using Error::Error;
};

/// A batch that does not satisfy I ∩ E = ∅, D ⊆ E, I ∩ D = ∅.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Invalid attenuation factor, criterion or engine parameter.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A method applied to an input it cannot handle (e.g. CG on a directed graph).
class MethodInapplicableError : public Error {
public:
    using Error::Error;
};

/// Singular or otherwise numerically broken linear system.
class NumericError : public Error {
public:
    using Error::Error;
};

/// An iteration budget ran out before the stopping rule fired.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string &what, double measure, std::vector<double> last = {})
        : Error(what), measure_(measure), last_(std::move(last)) {}

    /// Max bound gap (katz engine) or last change / residual (baselines).
    double measure() const noexcept { return measure_; }
    const std::vector<double> &last_iterate() const noexcept { return last_; }

private:
    double measure_;
    std::vector<double> last_;
};

} // namespace katzrank
