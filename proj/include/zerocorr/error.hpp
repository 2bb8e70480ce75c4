#pragma once

#include <stdexcept>
#include <string>

namespace zerocorr {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad arguments: wrong dimensions, out-of-range parameters, malformed files.
class InputError : public Error {
public:
    using Error::Error;
};

// Coincident or near-coincident points in a configuration.
class ConfigurationError : public InputError {
public:
    using InputError::InputError;
};

// Request exceeds an enumeration or exact-evaluation cap.
class SizeError : public Error {
public:
    using Error::Error;
};

// A numerical contract was violated (PSD failure, imaginary residue, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

class NotPositiveSemidefinite : public NumericalError {
public:
    explicit NotPositiveSemidefinite(double eigenvalue)
        : NumericalError("matrix is not positive semidefinite: eigenvalue "
                         + std::to_string(eigenvalue)),
          eigenvalue_(eigenvalue) {}

    double eigenvalue() const noexcept { return eigenvalue_; }

private:
    double eigenvalue_;
};

}  // namespace zerocorr
