#pragma once

#include <stdexcept>
#include <string>

namespace limlab {

/// Base class for every error raised by the library. Invalid arguments
/// (bad parameters, malformed grids) are reported with std::invalid_argument.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A query asked for the mass of an infinite set under an Infinite-class
/// measure, or for the total mass of an improper measure.
class InfiniteMassError : public Error {
 public:
  using Error::Error;
};

/// A restriction or splice would divide by a zero mass.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// The sequence does not let the mass of finite sets vanish on the scanned range.
class DecayPreconditionError : public Error {
 public:
  using Error::Error;
};

/// Exact counting would need to enumerate more integers than the practical ceiling.
class EnumerationLimitError : public Error {
 public:
  using Error::Error;
};

/// Malformed set expression or experiment configuration.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace limlab
