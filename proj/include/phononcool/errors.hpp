// errors.hpp - exception types and non-fatal diagnostics

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace phononcool {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument: non-positive rate, probability out of range, ...
class DomainError : public Error {
public:
    using Error::Error;
};

class SizeMismatch : public Error {
public:
    using Error::Error;
};

// Probability mass reached the top Fock level beyond the tail tolerance.
class TruncationOverflow : public Error {
public:
    using Error::Error;
};

// Product-form steady state does not decay within the truncation.
class NonNormalizable : public Error {
public:
    using Error::Error;
};

// Generator has more than one closed communicating class.
class DegenerateKernel : public Error {
public:
    using Error::Error;
};

// Integrator could not meet its tolerance, or a long-time run did not settle.
class StepFailure : public Error {
public:
    using Error::Error;
};

// Internal consistency check failed (oracle closure, large negative probability).
class InvariantViolation : public Error {
public:
    using Error::Error;
};

enum class WarningCode {
    truncation_overflow,
    renormalized,
    coarse_graining,
    first_order_validity,
    schedule,
};

struct Warning {
    WarningCode code;
    std::string message;
};

// Optional sink for warnings. Functions accept a nullable pointer and append to it.
struct Diagnostics {
    std::vector<Warning> warnings;

    void warn(WarningCode code, std::string message) { warnings.push_back({code, std::move(message)}); }

    bool has(WarningCode code) const
    {
        for (const auto& w : warnings) {
            if (w.code == code) {
                return true;
            }
        }
        return false;
    }
};

inline void warn(Diagnostics* diag, WarningCode code, std::string message)
{
    if (diag != nullptr) {
        diag->warn(code, std::move(message));
    }
}

} // namespace phononcool
