#include "chordtm/lab.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "chordtm/errors.hpp"

namespace chordtm {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

double parse_seconds(std::string_view tok, int line_no, const char* what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw DataError("line " + std::to_string(line_no) + ": cannot parse " +
                    what + " time '" + std::string(tok) + "'");
  return value;
}

}  // namespace

std::vector<AnnotatedSegment> parse_lab(std::string_view text,
                                        const LabParseOptions& opts) {
  std::vector<AnnotatedSegment> segments;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (!line.empty() && line.front() != '#') {
      auto fields = split_fields(line);
      if (!fields.empty()) {
        if (fields.size() < 3)
          throw DataError("line " + std::to_string(line_no) +
                          ": expected 'start end label', got '" +
                          std::string(line) + "'");
        AnnotatedSegment seg;
        seg.start = parse_seconds(fields[0], line_no, "start");
        seg.end = parse_seconds(fields[1], line_no, "end");
        seg.raw_label = std::string(fields[2]);
        if (seg.start < 0.0)
          throw DataError("line " + std::to_string(line_no) +
                          ": negative start time");
        if (seg.end <= seg.start)
          throw DataError("line " + std::to_string(line_no) +
                          ": segment end must be greater than start");
        if (!segments.empty() && seg.start < segments.back().end - 1e-9)
          throw DataError("line " + std::to_string(line_no) +
                          ": segment overlaps the previous one");
        auto reduced = reduce_chord(seg.raw_label);
        if (!reduced) {
          if (opts.unknown == UnknownLabelPolicy::kReject)
            throw DataError("line " + std::to_string(line_no) +
                            ": unparseable chord label '" + seg.raw_label + "'");
          reduced = ChordSymbol::no_chord();
        }
        seg.label = *reduced;
        segments.push_back(std::move(seg));
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return segments;
}

std::vector<AnnotatedSegment> read_lab_file(const std::filesystem::path& path,
                                            const LabParseOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open annotation file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_lab(buf.str(), opts);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_lab(const std::vector<AnnotatedSegment>& segments) {
  std::string out;
  char line[96];
  for (const auto& seg : segments) {
    std::snprintf(line, sizeof(line), "%.6f %.6f %s\n", seg.start, seg.end,
                  seg.raw_label.empty() ? seg.label.name().c_str()
                                        : seg.raw_label.c_str());
    out += line;
  }
  return out;
}

void write_lab_file(const std::filesystem::path& path,
                    const std::vector<AnnotatedSegment>& segments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write annotation file: " + path.string());
  out << format_lab(segments);
}

}  // namespace chordtm
