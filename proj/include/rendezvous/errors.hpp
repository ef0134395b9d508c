#pragma once

#include <stdexcept>

namespace rdv {

// Malformed data handed to a library entry point (empty raster, bad file...).
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A map file that is missing, unreadable or malformed.
struct MapReadError : InvalidInput {
  using InvalidInput::InvalidInput;
};

// Parameter set that cannot be used (non-positive limits, pop too small...).
struct InvalidConfig : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Caller broke a documented precondition, e.g. stepping an obstacle of the wrong kind.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct PlacementError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rdv
