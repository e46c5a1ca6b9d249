#ifndef WPCLD_ERRORS_HPP
#define WPCLD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wpcld {

/// Hyperbolic growth left the representable double range. Carries the time
/// at which the evaluation blew up so callers can report it.
class OverflowError : public std::runtime_error {
public:
    OverflowError(const std::string& what, double t)
        : std::runtime_error(what), time_(t) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Invalid run configuration or command line (usage errors).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem-level failure; message carries the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed field file (bad magic, truncated payload, ...).
class FormatError : public IoError {
public:
    using IoError::IoError;
};

}  // namespace wpcld

#endif  // WPCLD_ERRORS_HPP
