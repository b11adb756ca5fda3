#pragma once

#include <stdexcept>
#include <string>

namespace cksvar {

// The C layer maps each of these onto a status code.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionError : Error {
  using Error::Error;
};
struct DgpError : Error {
  using Error::Error;
};
struct CaseError : Error {
  using Error::Error;
};
struct AssumptionError : Error {
  using Error::Error;
};
struct NumericError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace cksvar
