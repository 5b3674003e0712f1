#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlsh {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller passed arguments that violate a documented precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A field contains NaN or Inf.
class NonFiniteError : public Error {
public:
    NonFiniteError(const std::string& what, std::size_t index)
        : Error(what + ": non-finite value at flat index " + std::to_string(index)),
          index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// The solution left the representable range during time integration.
class BlowUpError : public Error {
public:
    BlowUpError(double time, double max_abs)
        : Error("blow-up at t=" + std::to_string(time) +
                " (max |u| = " + std::to_string(max_abs) + ")"),
          time_(time), max_abs_(max_abs) {}

    double time() const noexcept { return time_; }
    double max_abs() const noexcept { return max_abs_; }

private:
    double time_;
    double max_abs_;
};

/// Configuration text could not be turned into a valid run.
class ConfigError : public Error {
public:
    ConfigError(int line, std::string key, const std::string& message)
        : Error(format(line, key, message)), line_(line), key_(std::move(key)) {}

    int line() const noexcept { return line_; }
    const std::string& key() const noexcept { return key_; }

private:
    static std::string format(int line, const std::string& key, const std::string& message) {
        std::string out = "config";
        if (line > 0) out += ":" + std::to_string(line);
        if (!key.empty()) out += ": key '" + key + "'";
        return out + ": " + message;
    }

    int line_;
    std::string key_;
};

}  // namespace nlsh
