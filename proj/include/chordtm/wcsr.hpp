#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chordtm/lab.hpp"

namespace chordtm {

struct SongScore {
  std::string song;
  double correct_seconds = 0.0;    // t_c
  double annotated_seconds = 0.0;  // t_a
  double ratio() const {
    return annotated_seconds > 0.0 ? correct_seconds / annotated_seconds : 0.0;
  }
};

// Weighted chord symbol recall, t_c / t_a, pooled over time.
struct WCSRReport {
  double correct_seconds = 0.0;
  double annotated_seconds = 0.0;
  std::vector<SongScore> songs;

  double wcsr() const {
    return annotated_seconds > 0.0 ? correct_seconds / annotated_seconds : 0.0;
  }
};

// Interval-intersection WCSR of one song. t_a counts reference time labelled
// major or minor (no-chord reference time is excluded); t_c counts the part
// of it where the estimate carries the same chord. Estimated no-chord over a
// maj/min reference is simply wrong time. Both lists must be sorted and
// non-overlapping.
WCSRReport wcsr(std::span<const AnnotatedSegment> reference,
                std::span<const AnnotatedSegment> estimate);

// Pooled over songs: sums t_c and t_a, never averages per-song ratios.
WCSRReport aggregate(std::span<const WCSRReport> reports);

// Song-level fold assignment: seeded shuffle, sizes within +-1, same seed
// same folds. Returns the fold id of each song in input order.
std::vector<int> make_folds(std::span<const std::string> song_ids, int n_folds,
                            std::uint64_t seed);

}  // namespace chordtm
