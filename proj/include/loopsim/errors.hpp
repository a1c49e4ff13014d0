#pragma once

#include <stdexcept>
#include <string>

namespace loopsim {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated by the caller (e.g. photon
/// conservation between beamsplitter input and output occupations).
class ContractViolationError : public Error {
 public:
  using Error::Error;
};

/// A numeric parameter lies outside its mathematical domain
/// (e.g. a loss probability outside [0, 1]).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A requested measurement outcome has probability zero (simulator) or lies
/// outside the reachable lattice region (tracker).
class ImpossibleOutcomeError : public Error {
 public:
  using Error::Error;
};

/// The architecture is valid but not supported by this operation
/// (e.g. the lattice tracker with a first loop length != 1, or loss > 0).
class UnsupportedArchitectureError : public Error {
 public:
  using Error::Error;
};

/// A new mode was coupled to a lattice mode that is not the maximal one;
/// only maximum-mode coupling is representable.
class UnsupportedCouplingError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration document or command-line usage.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A batch run exceeded the configured live-support bound (--max-support).
class SupportLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace loopsim
