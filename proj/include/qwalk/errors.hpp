#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

// Precondition on an index, size or range was violated.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Input data does not satisfy the invariants of its type.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Amplitude would leave the finite lattice.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

// Result lost too much precision to be trusted.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qwalk
