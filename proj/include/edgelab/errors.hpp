#pragma once
#include <stdexcept>
#include <string>

namespace edgelab {

// bad physical parameters or malformed input
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// P is the identity (eps = 0, k = 0): no decaying direction
struct DegenerateGapless : std::domain_error {
    using std::domain_error::domain_error;
};

struct NotAZeroMode : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoMidGapState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StepTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotConical : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}
