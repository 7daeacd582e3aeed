#pragma once

#include <stdexcept>
#include <string>

namespace malleable {

// Base of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-contract input (bad matrix, unknown symbol, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

// A configured size cap would be exceeded; never silently truncated.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// No embedding / deletion set exists for the requested host.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace malleable
