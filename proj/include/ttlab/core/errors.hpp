#pragma once

#include <stdexcept>
#include <string>

namespace ttlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Integrator or update produced a non-finite value.
class NumericalDivergence : public Error {
public:
    explicit NumericalDivergence(const std::string& what)
        : Error("numerical divergence: " + what) {}
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Configuration text or values failed to parse or validate.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::string source = {}, int line = 0)
        : Error(format(what, source, line)), source_(std::move(source)), line_(line) {}

    const std::string& source() const { return source_; }
    int line() const { return line_; }

private:
    static std::string format(const std::string& what, const std::string& source, int line) {
        if (source.empty()) return what;
        if (line <= 0) return source + ": " + what;
        return source + ":" + std::to_string(line) + ": " + what;
    }

    std::string source_;
    int line_ = 0;
};

}  // namespace ttlab
