#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "chordtm/chord.hpp"

namespace chordtm {

// One reference annotation: [start, end) seconds plus the reduced chord class
// and the label string as written in the file.
struct AnnotatedSegment {
  double start = 0.0;
  double end = 0.0;
  ChordSymbol label;
  std::string raw_label;
};

enum class UnknownLabelPolicy {
  kReject,   // unparseable chord label is an error
  kNoChord,  // fold it into the no-chord class
};

struct LabParseOptions {
  UnknownLabelPolicy unknown = UnknownLabelPolicy::kReject;
};

// Parses .lab text: one "start end label" triple per line, whitespace
// separated, '#'-prefixed comment lines ignored, CRLF tolerated. Segments
// must be sorted and non-overlapping with end > start. Throws DataError with
// the offending line number otherwise.
std::vector<AnnotatedSegment> parse_lab(std::string_view text,
                                        const LabParseOptions& opts = {});

std::vector<AnnotatedSegment> read_lab_file(const std::filesystem::path& path,
                                            const LabParseOptions& opts = {});

std::string format_lab(const std::vector<AnnotatedSegment>& segments);

void write_lab_file(const std::filesystem::path& path,
                    const std::vector<AnnotatedSegment>& segments);

}  // namespace chordtm
