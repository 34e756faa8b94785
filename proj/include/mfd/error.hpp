#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mfd {

// Every failure carries a stable machine-readable name (e.g. "EmptyVolume",
// "BadMagic") in addition to the human-readable message. The CLI prints the
// name on the diagnostic stream so callers can dispatch on it.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

[[noreturn]] inline void fail(std::string name, const std::string& what) {
    throw Error(std::move(name), what);
}

// Bad command-line usage (as opposed to a runtime failure); the CLI maps
// this to exit code 1 instead of 2.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mfd
