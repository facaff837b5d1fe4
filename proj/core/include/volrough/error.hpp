#pragma once

#include <stdexcept>
#include <string>

namespace volrough {

/// Invalid parameters, malformed configuration, violated preconditions.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to converge, overflowed, or hit a singular case.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written, or its contents violate the schema.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace volrough
