// errors.hpp - exception types shared by the fockgen library and CLI.

#pragma once

#include <stdexcept>
#include <string>

namespace fockgen {

// Precondition violated by the caller (bad N, k, x, dt, ...).
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A state was looked up in a manifold it does not belong to.
class NotFound : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

// A formula would divide by zero (vanishing Bohr frequency, Delta = 0, ...).
class SingularError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Numerical pathology during propagation (step instability, impossible jump).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed or schema-violating configuration document.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace fockgen
