#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace shal {

struct InvalidSparsity : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegenerateVector : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Dykstra / Bregman projection ran out of iterations. Carries the best
/// iterate found so far so callers can decide whether to keep going.
struct ProjectionNotConverged : std::runtime_error {
    ProjectionNotConverged(std::string msg, std::vector<double> iterate)
        : std::runtime_error(std::move(msg)), best_iterate(std::move(iterate)) {}
    std::vector<double> best_iterate;
};

struct BandSamplingExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModeMismatch : std::logic_error {
    using std::logic_error::logic_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace shal
