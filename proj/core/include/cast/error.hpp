#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cast {

/// Base class for all cast errors.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file is missing or unreadable.
class io_error : public error {
public:
    using error::error;
};

/// A record in a stage file could not be parsed. Carries the 1-based line number.
class parse_error : public error {
public:
    parse_error(const std::string& path, std::size_t line, const std::string& what)
        : error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// A domain invariant was violated (duplicate ids, out-of-order frames, ...).
class integrity_error : public error {
public:
    using error::error;
};

/// Invalid configuration value or malformed config file.
class config_error : public error {
public:
    using error::error;
};

} // namespace cast
