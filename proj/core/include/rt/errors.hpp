#pragma once

#include <stdexcept>
#include <string>

namespace rt {

// Malformed input: a scenario that cannot be read or a request that makes no sense.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Structurally invalid data: non-associative table, d*d != 0, non-positive metric, ...
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A computation that cannot proceed numerically, e.g. a non-acyclic complex in strict mode.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rt
