#pragma once

#include <stdexcept>
#include <string>

namespace macgof {

/// Input data is unusable (bad file contents, missing columns, malformed rows).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure failed: rank deficiency, divergence, non-finite values.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace macgof
