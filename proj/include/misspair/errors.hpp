#ifndef MISSPAIR_ERRORS_HPP
#define MISSPAIR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace misspair {

// Base class for every failure this library reports on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class TooFewComplete : public Error {
 public:
  using Error::Error;
};

class NoIncomplete : public Error {
 public:
  using Error::Error;
};

class NonFinite : public Error {
 public:
  using Error::Error;
};

class MissingFirstComponent : public Error {
 public:
  using Error::Error;
};

class ZeroVariance : public Error {
 public:
  using Error::Error;
};

class DegenerateTrace : public Error {
 public:
  using Error::Error;
};

class InvalidCounts : public Error {
 public:
  using Error::Error;
};

class PatternRedrawExhausted : public Error {
 public:
  using Error::Error;
};

// Malformed input files (CSV rows, JSON configs). Messages carry the row
// number or JSON pointer of the offending element.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace misspair

#endif  // MISSPAIR_ERRORS_HPP
