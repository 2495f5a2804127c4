#pragma once

#include <stdexcept>
#include <string>

namespace solb {

// Caller violated a documented precondition.
struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input text could not be parsed.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Work would exceed the configured node or time budget.
struct capacity_error : std::runtime_error {
  capacity_error(const std::string& what, std::string demanded)
      : std::runtime_error(what), demanded(std::move(demanded)) {}
  std::string demanded;
};

// An asserted structural invariant failed; carries step and clause.
struct invariant_error : std::logic_error {
  invariant_error(const std::string& clause, long step, const std::string& detail)
      : std::logic_error("step " + std::to_string(step) + ": " + clause + ": " + detail),
        clause(clause),
        step(step) {}
  std::string clause;
  long step;
};

// An online algorithm returned something that is not a decision.
struct protocol_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace solb
