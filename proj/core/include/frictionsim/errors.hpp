#pragma once

#include <stdexcept>
#include <string>

namespace frictionsim {

/// A parameter outside its admissible range. field() carries the config key
/// (e.g. "mass_kg") so callers can report it back verbatim.
class ValidationError : public std::invalid_argument {
public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Malformed input document (JSON, CSV, sweep string).
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// static_friction() called for a driving force outside the static cone.
class StaticConeViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class NonMonotonicScript : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace frictionsim
