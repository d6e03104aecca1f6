#pragma once

#include <stdexcept>

namespace scrank {

// Thrown for unreadable/unwritable files and stream failures.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown for malformed inputs and invalid parameter combinations.
struct invalid_input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace scrank
