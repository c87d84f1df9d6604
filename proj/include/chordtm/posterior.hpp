#pragma once

#include <vector>

#include "chordtm/chord.hpp"
#include "chordtm/frames.hpp"
#include "chordtm/types.hpp"

namespace chordtm {

// Frame-wise acoustic class probabilities: one row per frame, one column per
// chord class, rows sum to 1.
struct PosteriorMatrix {
  double frame_rate = kDefaultFrameRate;
  Matrix values;
};

// Throws DataError (with the row index) if a row is not a distribution
// within `tolerance`.
void validate_posteriors(const Matrix& values, double tolerance = 1e-6);

// Per-frame argmax, ties to the lowest class index.
std::vector<ChordSymbol> argmax_labels(const Matrix& values);

}  // namespace chordtm
