// errors.hpp — Exception types shared by the library and the command-line front end.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hml {

// Non-fatal diagnostics (validity-regime violations and the like) are appended here
// by functions that accept an optional sink.
using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string message) {
    if (sink) sink->push_back(std::move(message));
}

// Violated physical precondition (non-positive radius, resonant detuning, ...).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Malformed or incomplete configuration. `path` names the offending field, e.g. "loop.tau".
class config_error : public std::invalid_argument {
public:
    config_error(std::string path, const std::string& what)
        : std::invalid_argument(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// A numerical procedure failed to reach its tolerance.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

} // namespace hml
