#pragma once

#include <optional>
#include <vector>

#include "chordtm/frames.hpp"
#include "chordtm/lab.hpp"
#include "chordtm/posterior.hpp"
#include "chordtm/state_space.hpp"
#include "chordtm/types.hpp"

namespace chordtm {

struct DecodeOptions {
  // Reject posterior rows that are not distributions (1e-6 tolerance).
  bool validate_rows = true;
  // Optional class prior; when set, each emission is divided by it. Off by
  // default: a uniform prior only shifts every path score by a constant.
  std::optional<Vector> class_prior;
};

struct DecodingResult {
  FrameSequence frames;
  std::vector<AnnotatedSegment> segments;  // run lengths of frames, in seconds
  double log_prob = 0.0;
};

// Exact max-probability state path through the flattened state space given
// frame posteriors, mapped to chord labels through each state's sounding
// chord. Score ties are broken toward the lowest predecessor state index, so
// decoding is fully deterministic.
DecodingResult viterbi(const StateSpace& space, const PosteriorMatrix& posteriors,
                       const DecodeOptions& opts = {});

}  // namespace chordtm
