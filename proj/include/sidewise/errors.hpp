#pragma once

#include <stdexcept>
#include <string>

namespace sidewise {

/// Raised when an input violates an operation's precondition.
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised by explicit schemes whose Courant number exceeds the allowed safety factor.
class CflError : public ContractError {
public:
    using ContractError::ContractError;
};

/// Raised when an exact-control method is asked for a horizon T <= L*beta.
class MinimalTimeError : public ContractError {
public:
    MinimalTimeError(double horizon, double min_time)
        : ContractError("time horizon T = " + std::to_string(horizon) +
                        " does not exceed the minimal control time L*beta = " +
                        std::to_string(min_time)),
          horizon_(horizon), min_time_(min_time) {}

    double horizon() const noexcept { return horizon_; }
    double min_time() const noexcept { return min_time_; }

private:
    double horizon_;
    double min_time_;
};

}  // namespace sidewise
