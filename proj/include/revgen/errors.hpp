#pragma once

#include <stdexcept>

namespace revgen {

// Generator parameters violate an invariant (even multiplier, field out of range).
struct InvalidGenerator : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A width/precision argument is outside its supported range.
struct RangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// An orbit failed to close within its cap; the map is a bijection on a
// finite set, so this indicates a bug rather than a property of the input.
struct CycleNotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The requested sweep would exceed the exhaustive-verification limits.
struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A walk expected to return to its seed did not.
struct PeriodMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation requested in an arithmetic mode that cannot support it.
struct ModeViolation : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace revgen
