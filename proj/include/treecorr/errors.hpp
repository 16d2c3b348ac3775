#pragma once

#include <stdexcept>
#include <string>

namespace treecorr {

// Input violates an operation's precondition. The CLI maps this to exit code 1.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Random generation gave up after the configured number of attempts.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested radius-r ball is cut off by the host or is not a tree.
class BallError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Rule outputs have zero empirical variance, so a correlation is undefined.
class DegenerateVarianceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix failed the positive semi-definite test.
class NotPsdError : public std::runtime_error {
 public:
  NotPsdError(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

}  // namespace treecorr
