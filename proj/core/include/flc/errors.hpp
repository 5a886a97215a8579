#pragma once

#include <stdexcept>
#include <string>

namespace flc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (dimension mismatch, bad parameters, bad files).
class InputError : public Error {
public:
    using Error::Error;
};

/// A documented precondition does not hold for otherwise well-formed input.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The requested bound cannot be certified (missing metadata, incomplete catalog).
class CertificationError : public Error {
public:
    using Error::Error;
};

/// An iterative certified procedure hit its iteration cap before terminating.
class IterationCapError : public Error {
public:
    IterationCapError(const std::string& what, int iterations)
        : Error(what), iterations_(iterations) {}
    int iterations() const noexcept { return iterations_; }

private:
    int iterations_;
};

}  // namespace flc
