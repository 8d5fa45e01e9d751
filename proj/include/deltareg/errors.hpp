#pragma once

#include <stdexcept>
#include <string>

namespace deltareg {

// Validation errors: the caller violated a documented precondition
// (bad flag value, malformed input, unsatisfiable configuration).
// The CLI maps these to exit code 1.
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Runtime failures: the computation itself failed (solver blow-up,
// quadrature tolerance not met). The CLI maps these to exit code 2.
struct runtime_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_scaling_error : validation_error {
    using validation_error::validation_error;
};

struct unsupported_rule_error : validation_error {
    using validation_error::validation_error;
};

struct invalid_input_error : validation_error {
    using validation_error::validation_error;
};

struct invalid_domain_error : validation_error {
    using validation_error::validation_error;
};

// Region partition with an empty interior region.
struct empty_p_region_error : validation_error {
    using validation_error::validation_error;
};

// Norm requested over a region containing no collocation nodes.
struct empty_region_error : validation_error {
    using validation_error::validation_error;
};

// Regression input unusable (nonpositive errors, too few points).
struct invalid_data_error : validation_error {
    using validation_error::validation_error;
};

// Internal invariant violation while building a kernel.
struct construction_failure : runtime_failure {
    using runtime_failure::runtime_failure;
};

// Adaptive quadrature could not reach the requested tolerance.
struct oracle_failure_error : runtime_failure {
    using runtime_failure::runtime_failure;
};

// Non-finite state during time integration; carries the failure time.
struct blow_up_error : runtime_failure {
    double time;
    explicit blow_up_error(double t)
        : runtime_failure("non-finite solution state at t = " + std::to_string(t)),
          time(t) {}
};

}  // namespace deltareg
