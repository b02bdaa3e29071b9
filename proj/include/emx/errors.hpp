#pragma once

#include <stdexcept>
#include <string>

namespace emx {

// Error taxonomy. Each type corresponds to one failure mode named in the
// module contracts; the CLI maps them onto exit codes.

struct shape_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Negative-order operator applied to a field with nonzero mean.
struct mean_value_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// min(1+n) <= 0: the state has left the small-data regime the model assumes.
struct vacuum_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Grid cannot resolve the requested derivative order.
struct resolution_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct insufficient_data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct degenerate_normalization_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A decay tier was requested outside its hypotheses (e.g. B_infinity != 0).
struct hypothesis_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct log_domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace emx
