#pragma once

#include <stdexcept>
#include <string>

namespace hamlab {

// Violated caller contract (bad pivot, malformed factor, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input exceeds a configured enumeration / DP cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Formula evaluated outside the range where it is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed text input (edge lists, factor files, key=value configs).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exact-oracle inequality failed during an experiment. `state` carries
// everything needed to replay the offending trial.
class AssertionFailure : public std::runtime_error {
 public:
  AssertionFailure(const std::string& what, std::string state)
      : std::runtime_error(what), state_(std::move(state)) {}
  const std::string& state() const noexcept { return state_; }

 private:
  std::string state_;
};

}  // namespace hamlab
