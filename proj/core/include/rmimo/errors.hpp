#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rmimo {

// Root of the library's exception hierarchy.  Everything thrown on purpose
// derives from this, so callers can catch one type at the boundary.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A dimension or count is out of range (non-positive size, tau < N, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A power or variance that must be positive is not.
class PowerError : public Error {
 public:
  using Error::Error;
};

// Antenna spacing is unusable for the requested operation.  The closed-form
// expressions are only valid at half-wavelength spacing.
class SpacingError : public Error {
 public:
  using Error::Error;
};

// Requested cell count has no supported layout.
class UnsupportedLayout : public Error {
 public:
  using Error::Error;
};

// An asymptotic limit does not exist for this configuration (the quantity
// grows without bound instead of converging).
class UnboundedLimit : public Error {
 public:
  using Error::Error;
};

// A cell or user index does not address a valid entry.
class IndexError : public Error {
 public:
  using Error::Error;
};

// Too few samples to form the requested statistic.
class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

// Malformed scenario file, sweep specification, or CLI value.
class ParseError : public Error {
 public:
  using Error::Error;
};

enum class ConfigFault { dimension, power, spacing };

struct ConfigViolation {
  ConfigFault fault;
  std::string message;
};

// Carries every violated configuration invariant at once, not just the first
// one found, so a bad config surfaces all its problems in one pass.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigViolation> violations);

  const std::vector<ConfigViolation>& violations() const { return violations_; }
  bool has(ConfigFault fault) const;

 private:
  static std::string join(const std::vector<ConfigViolation>& violations);
  std::vector<ConfigViolation> violations_;
};

}  // namespace rmimo
