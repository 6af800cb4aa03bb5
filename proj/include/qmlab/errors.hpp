#pragma once

#include <stdexcept>
#include <string>

namespace qm {

/// Raised for caller mistakes: bad parameters, malformed functions,
/// mismatched domains. The CLI maps these to exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InvalidParam : public InputError {
public:
    using InputError::InputError;
};

class InvalidExponent : public InputError {
public:
    using InputError::InputError;
};

class DomainViolation : public InputError {
public:
    using InputError::InputError;
};

class DomainMismatch : public InputError {
public:
    using InputError::InputError;
};

class DiscontinuousPaste : public InputError {
public:
    using InputError::InputError;
};

/// Raised when a solver cannot deliver an answer for well-formed input.
/// The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoSignChange : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularMatrix : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class Infeasible : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class Unbounded : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace qm
