#pragma once

#include <stdexcept>
#include <string>

namespace gapsim {

/// Base of every error raised by the library. CLI maps these to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape problems: non-square matrices, indices out of range.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// A transition entry outside {-5,-4,-3,0,3,4,5}.
class AmplitudeError : public Error {
public:
    using Error::Error;
};

/// A well-formed matrix that is not a scaled unitary, or an inconsistent machine.
class ModelError : public Error {
public:
    using Error::Error;
};

class BoundsError : public Error {
public:
    using Error::Error;
};

/// Enumeration caps, branch bounds, tower budgets.
class ResourceError : public Error {
public:
    using Error::Error;
};

class DecodeError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// Oracle consulted on a string outside its declared domain.
class OracleError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// Oracle machine whose paths do not all make the same number of queries.
class NormalizationError : public ModelError {
public:
    using ModelError::ModelError;
};

/// A machine or family that breaks the promise it was supposed to satisfy.
/// `witness` names the offending input (or oracle) in human-readable form.
class PromiseViolation : public Error {
public:
    PromiseViolation(const std::string& what, std::string witness)
        : Error(what), witness_(std::move(witness)) {}

    const std::string& witness() const noexcept { return witness_; }

private:
    std::string witness_;
};

/// An oracle machine that is not categorically bounded-error.
class CategoricalError : public PromiseViolation {
public:
    using PromiseViolation::PromiseViolation;
};

} // namespace gapsim
