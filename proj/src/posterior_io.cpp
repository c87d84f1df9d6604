#include "chordtm/posterior_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "chordtm/errors.hpp"

namespace chordtm {

namespace {
constexpr int kClasses = ChordSymbol::kNumClasses;

std::string expected_header() {
  std::string h = "frame";
  for (int c = 0; c < kClasses; ++c) h += ",p" + std::to_string(c);
  return h;
}
}  // namespace

void write_posterior_csv(const std::filesystem::path& path,
                         const PosteriorMatrix& posteriors) {
  if (posteriors.values.cols() != kClasses)
    throw DataError("posterior matrix must have " + std::to_string(kClasses) +
                    " columns");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write posterior file: " + path.string());
  char buf[64];
  std::snprintf(buf, sizeof(buf), "# frame_rate=%.9g\n", posteriors.frame_rate);
  out << buf << expected_header() << '\n';
  for (Eigen::Index t = 0; t < posteriors.values.rows(); ++t) {
    out << t;
    for (int c = 0; c < kClasses; ++c) {
      std::snprintf(buf, sizeof(buf), ",%.17g", posteriors.values(t, c));
      out << buf;
    }
    out << '\n';
  }
}

PosteriorMatrix read_posterior_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open posterior file: " + path.string());

  PosteriorMatrix result;
  bool saw_rate = false, saw_header = false;
  std::vector<double> data;
  Eigen::Index rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (auto pos = line.find("frame_rate="); pos != std::string::npos) {
        result.frame_rate = std::stod(line.substr(pos + 11));
        saw_rate = true;
      }
      continue;
    }
    if (!saw_header) {
      int cols = static_cast<int>(std::count(line.begin(), line.end(), ','));
      if (line != expected_header())
        throw DataError(path.string() + ": expected header with " +
                        std::to_string(kClasses) + " probability columns, got " +
                        std::to_string(cols));
      saw_header = true;
      continue;
    }

    double row_sum = 0.0;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    long long frame_idx = 0;
    auto [p1, ec1] = std::from_chars(p, end, frame_idx);
    if (ec1 != std::errc{})
      throw DataError(path.string() + ": row " + std::to_string(rows) +
                      ": cannot parse frame index");
    p = p1;
    for (int c = 0; c < kClasses; ++c) {
      if (p >= end || *p != ',')
        throw DataError(path.string() + ": row " + std::to_string(rows) +
                        ": expected " + std::to_string(kClasses) +
                        " probability columns");
      ++p;
      double v = 0.0;
      auto [p2, ec2] = std::from_chars(p, end, v);
      if (ec2 != std::errc{})
        throw DataError(path.string() + ": row " + std::to_string(rows) +
                        ": cannot parse probability");
      p = p2;
      data.push_back(v);
      row_sum += v;
    }
    if (p != end)
      throw DataError(path.string() + ": row " + std::to_string(rows) +
                      ": trailing fields beyond " + std::to_string(kClasses) +
                      " columns");
    if (std::abs(row_sum - 1.0) > 1e-4)
      throw DataError(path.string() + ": row " + std::to_string(rows) +
                      " sums to " + std::to_string(row_sum) + ", not 1");
    ++rows;
  }
  if (!saw_header)
    throw DataError(path.string() + ": missing posterior header");
  if (!saw_rate)
    throw DataError(path.string() + ": missing '# frame_rate=' line");

  result.values.resize(rows, kClasses);
  for (Eigen::Index t = 0; t < rows; ++t)
    for (int c = 0; c < kClasses; ++c)
      result.values(t, c) = data[static_cast<std::size_t>(t) * kClasses + c];
  return result;
}

}  // namespace chordtm
