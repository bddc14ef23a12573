#pragma once

#include <stdexcept>
#include <string>

namespace lindyn {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exponent overflow or alignment past the mantissa budget. Never silent.
struct arithmetic_fault : error {
  using error::error;
};

// A result would need operator data beyond the materialized horizon.
struct horizon_error : error {
  using error::error;
};

// Schedule or input violates a stated constraint; message names it.
struct validation_error : error {
  using error::error;
};

// Inverse requested on a spec whose recurrence does not support it.
struct invertibility_error : validation_error {
  using validation_error::validation_error;
};

// Dense-section or scan budget exceeded.
struct budget_error : error {
  using error::error;
};

}  // namespace lindyn
