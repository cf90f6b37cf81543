#pragma once

#include <stdexcept>
#include <string>

namespace cpa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the support of the relevant distribution.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid distribution, family or agent parameters.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// Single-crossing or monotonicity assumptions fail where an operation relies on them.
class RegularityError : public Error {
 public:
  using Error::Error;
};

class UnsupportedInstance : public Error {
 public:
  using Error::Error;
};

class UnsupportedPair : public Error {
 public:
  using Error::Error;
};

class InvalidNoise : public Error {
 public:
  using Error::Error;
};

class InvalidAxis : public Error {
 public:
  using Error::Error;
};

}  // namespace cpa
