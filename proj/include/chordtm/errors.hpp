#pragma once

#include <stdexcept>

namespace chordtm {

// Malformed or inconsistent input data: annotation files, posterior files,
// model files, mismatched shapes.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure: diverging optimisation, invalid probability mass.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace chordtm
