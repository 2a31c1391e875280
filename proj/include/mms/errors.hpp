#pragma once

#include <stdexcept>
#include <string>

namespace mms {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The instance violates a structural invariant (partition, quotas, signs).
class InvalidInstance : public Error {
public:
  using Error::Error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// An enumeration or state space exceeded its tractability guard.
class GuardExceeded : public Error {
public:
  using Error::Error;
};

/// An algorithm reached a state its correctness argument rules out.
class InternalInvariantError : public Error {
public:
  using Error::Error;
};

}  // namespace mms
