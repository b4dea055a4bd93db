#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ccc {

// Base of every error thrown by the library. Each subclass maps onto one
// CLI exit-code category (see tools/ccc_main.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : Error(msg + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// Denominator vanishes at an evaluation point.
class PoleError : public Error {
 public:
  using Error::Error;
};

class BadPrimeError : public Error {
 public:
  using Error::Error;
};

class SingularError : public Error {
 public:
  using Error::Error;
};

class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class SamplingError : public Error {
 public:
  using Error::Error;
};

class FieldMismatchError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// An identity that the mathematics guarantees has failed. Always a bug.
class InternalIdentityError : public Error {
 public:
  using Error::Error;
};

}  // namespace ccc
