#include "chordtm/frames.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "chordtm/errors.hpp"

namespace chordtm {

FrameSequence sample_frames(const std::vector<AnnotatedSegment>& segments,
                            double frame_rate) {
  if (segments.empty()) throw DataError("cannot sample frames: no segments");
  if (frame_rate <= 0.0) throw std::invalid_argument("frame rate must be > 0");

  double last_end = segments.back().end;
  int total = static_cast<int>(std::ceil(last_end * frame_rate - 1e-9));
  if (total < 1) total = 1;

  FrameSequence out;
  out.frame_rate = frame_rate;
  out.labels.reserve(total);
  std::size_t seg = 0;
  for (int t = 0; t < total; ++t) {
    double center = (t + 0.5) / frame_rate;
    while (seg < segments.size() && segments[seg].end <= center) ++seg;
    if (seg < segments.size() && segments[seg].start <= center)
      out.labels.push_back(segments[seg].label);
    else
      out.labels.push_back(ChordSymbol::no_chord());
  }
  return out;
}

std::vector<AnnotatedSegment> to_segments(const FrameSequence& frames) {
  std::vector<AnnotatedSegment> out;
  int t = 0;
  for (const auto& [label, len] : run_lengths(frames.labels)) {
    AnnotatedSegment seg;
    seg.start = t / frames.frame_rate;
    seg.end = (t + len) / frames.frame_rate;
    seg.label = label;
    seg.raw_label = label.name();
    out.push_back(std::move(seg));
    t += len;
  }
  return out;
}

void write_frames_csv(const std::filesystem::path& path,
                      const FrameSequence& frames) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write frame file: " + path.string());
  char line[64];
  std::snprintf(line, sizeof(line), "# frame_rate=%.9g\n", frames.frame_rate);
  out << line << "frame,chord_index\n";
  for (std::size_t t = 0; t < frames.labels.size(); ++t)
    out << t << ',' << frames.labels[t].index() << '\n';
}

FrameSequence read_frames_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open frame file: " + path.string());
  FrameSequence frames;
  std::string line;
  bool saw_header = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (auto pos = line.find("frame_rate="); pos != std::string::npos)
        frames.frame_rate = std::stod(line.substr(pos + 11));
      continue;
    }
    if (!saw_header) {
      if (line != "frame,chord_index")
        throw DataError(path.string() + ": unexpected header '" + line + "'");
      saw_header = true;
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw DataError(path.string() + ": line " + std::to_string(line_no) +
                      ": expected 'frame,chord_index'");
    int idx = std::stoi(line.substr(comma + 1));
    if (idx < 0 || idx >= ChordSymbol::kNumClasses)
      throw DataError(path.string() + ": line " + std::to_string(line_no) +
                      ": chord index out of range");
    frames.labels.push_back(ChordSymbol(idx));
  }
  return frames;
}

}  // namespace chordtm
