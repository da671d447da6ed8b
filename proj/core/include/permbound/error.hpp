#pragma once

#include <stdexcept>
#include <string>

namespace permbound {

/// Base of every exception the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input: bad file contents, negative entries,
/// non-square matrices, violated preconditions.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An operation that conditions on the Gibbs distribution was given a matrix
/// whose support admits no perfect matching.
class ZeroPermanentError : public Error {
 public:
  ZeroPermanentError() : Error("zero permanent: support admits no perfect matching") {}
  using Error::Error;
};

/// Matrix dimension exceeds what the chosen algorithm is allowed to handle.
class DimensionGuardError : public Error {
 public:
  DimensionGuardError(const std::string& algorithm, int n, int limit)
      : Error(algorithm + ": dimension " + std::to_string(n) + " exceeds guard " +
              std::to_string(limit)),
        n_(n),
        limit_(limit) {}

  int n() const { return n_; }
  int limit() const { return limit_; }

 private:
  int n_;
  int limit_;
};

/// Internal consistency failure (a state the mathematics says is unreachable).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace permbound
