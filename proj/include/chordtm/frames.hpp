#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "chordtm/chord.hpp"
#include "chordtm/lab.hpp"

namespace chordtm {

constexpr double kDefaultFrameRate = 10.0;  // Hz

// A chord label per audio frame at a fixed frame rate.
struct FrameSequence {
  double frame_rate = kDefaultFrameRate;
  std::vector<ChordSymbol> labels;
};

// Samples annotations to frames. Frame t takes the label of the segment
// containing its centre (t + 0.5) / rate under half-open [start, end)
// intervals; gaps and trailing silence become no-chord. The total frame count
// is ceil(last end * rate), with a 1e-9 slack against float noise in the
// product.
FrameSequence sample_frames(const std::vector<AnnotatedSegment>& segments,
                            double frame_rate);

// Run-length encodes frames back into segments with boundaries at frame
// edges. Inverse of sample_frames for frame-aligned segments.
std::vector<AnnotatedSegment> to_segments(const FrameSequence& frames);

// Removes consecutive duplicate symbols: (a,a,b,b,a) -> (a,b,a).
template <typename T>
std::vector<T> compress(const std::vector<T>& xs) {
  std::vector<T> out;
  for (const T& x : xs)
    if (out.empty() || !(out.back() == x)) out.push_back(x);
  return out;
}

// (a,a,b,b,a) -> [(a,2),(b,2),(a,1)]. Durations sum to the input length and
// the symbols equal compress(xs).
template <typename T>
std::vector<std::pair<T, int>> run_lengths(const std::vector<T>& xs) {
  std::vector<std::pair<T, int>> out;
  for (const T& x : xs) {
    if (!out.empty() && out.back().first == x)
      ++out.back().second;
    else
      out.emplace_back(x, 1);
  }
  return out;
}

// CSV with header "frame,chord_index" plus a "# frame_rate=<Hz>" line.
void write_frames_csv(const std::filesystem::path& path,
                      const FrameSequence& frames);
FrameSequence read_frames_csv(const std::filesystem::path& path);

}  // namespace chordtm
