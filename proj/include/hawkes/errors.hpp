#ifndef HAWKES_ERRORS_HPP
#define HAWKES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hawkes {

// Invalid or inconsistent run configuration. `path` locates the offending
// key in the config document (e.g. "model.populations[0].nu").
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path.empty() ? what : path + ": " + what),
          path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// Numerical failure during simulation or analysis (overflow, divergence,
// root finder breakdown).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Not enough data to run a statistical procedure (sample sizes, spike counts).
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hawkes

#endif
