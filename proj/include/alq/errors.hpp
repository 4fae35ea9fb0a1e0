#pragma once

#include <stdexcept>
#include <string>

namespace alq {

// Bad user-supplied parameters (CLI exit status 1).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Memory, size or effort limits exceeded (CLI exit status 2).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Fixed-width integer overflow; never wrapped silently.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

}  // namespace alq
