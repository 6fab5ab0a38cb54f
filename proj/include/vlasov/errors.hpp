#pragma once

#include <stdexcept>
#include <string>

namespace vlasov {

// Base of every solver-side failure. The CLI maps ConfigInvalid to exit code 2
// and everything else derived from Error to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class NeutralityViolated : public Error {
 public:
  using Error::Error;
};

class EscapeThresholdExceeded : public Error {
 public:
  using Error::Error;
};

class EnvelopeViolation : public Error {
 public:
  using Error::Error;
};

class NonTermination : public Error {
 public:
  using Error::Error;
};

class InsufficientPeaks : public Error {
 public:
  using Error::Error;
};

class SolverBreakdown : public Error {
 public:
  using Error::Error;
};

}  // namespace vlasov
