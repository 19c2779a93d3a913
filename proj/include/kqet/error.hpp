#pragma once

#include <stdexcept>
#include <string>

namespace kqet {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: site out of range, invalid parameters, wrong shapes.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A quantity that must be real or Hermitian came out otherwise.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The model has no term on a site that the protocol needs.
class DegenerateModelError : public Error {
 public:
  using Error::Error;
};

/// Iterative eigensolver did not converge.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, int iterations)
      : Error(what + " (after " + std::to_string(iterations) + " iterations)"),
        iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

/// Projection onto a measurement outcome with vanishing probability.
class ImpossibleOutcomeError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds what the dense backend can materialize.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration document or command line.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace kqet
