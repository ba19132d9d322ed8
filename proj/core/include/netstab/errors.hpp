#pragma once

#include <stdexcept>
#include <string>

namespace netstab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration or model specification. `key` names the offending field
// when one can be identified.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg, std::string key = {})
      : Error(msg), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class ContractViolation : public Error { using Error::Error; };
class NonConvergence : public Error { using Error::Error; };
class NeighborhoodTooLarge : public Error { using Error::Error; };
class NoEquilibrium : public Error { using Error::Error; };
class TooLarge : public Error { using Error::Error; };
class Separation : public Error { using Error::Error; };
class Degenerate : public Error { using Error::Error; };
class ZeroDenominator : public Error { using Error::Error; };
class InsufficientData : public Error { using Error::Error; };
class SupercriticalSuspected : public Error { using Error::Error; };
class QuadratureFailure : public Error { using Error::Error; };
class TooFewNetworks : public Error { using Error::Error; };

}  // namespace netstab
