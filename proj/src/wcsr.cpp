#include "chordtm/wcsr.hpp"

#include <algorithm>
#include <stdexcept>

#include "chordtm/errors.hpp"
#include "chordtm/rng.hpp"

namespace chordtm {

namespace {
void check_sorted(std::span<const AnnotatedSegment> segments, const char* who) {
  for (std::size_t i = 1; i < segments.size(); ++i)
    if (segments[i].start < segments[i - 1].end - 1e-9)
      throw DataError(std::string(who) +
                      " segments overlap near t=" +
                      std::to_string(segments[i].start));
}
}  // namespace

WCSRReport wcsr(std::span<const AnnotatedSegment> reference,
                std::span<const AnnotatedSegment> estimate) {
  check_sorted(reference, "reference");
  check_sorted(estimate, "estimate");

  WCSRReport report;
  std::size_t e = 0;
  for (const auto& ref : reference) {
    if (ref.label.is_no_chord()) continue;
    report.annotated_seconds += ref.end - ref.start;
    while (e < estimate.size() && estimate[e].end <= ref.start) ++e;
    for (std::size_t j = e; j < estimate.size() && estimate[j].start < ref.end;
         ++j) {
      if (estimate[j].label != ref.label) continue;
      double lo = std::max(ref.start, estimate[j].start);
      double hi = std::min(ref.end, estimate[j].end);
      if (hi > lo) report.correct_seconds += hi - lo;
    }
  }
  return report;
}

WCSRReport aggregate(std::span<const WCSRReport> reports) {
  if (reports.empty())
    throw std::invalid_argument("cannot aggregate zero reports");
  WCSRReport pooled;
  for (const auto& r : reports) {
    pooled.correct_seconds += r.correct_seconds;
    pooled.annotated_seconds += r.annotated_seconds;
    pooled.songs.insert(pooled.songs.end(), r.songs.begin(), r.songs.end());
  }
  return pooled;
}

std::vector<int> make_folds(std::span<const std::string> song_ids, int n_folds,
                            std::uint64_t seed) {
  if (n_folds < 2) throw std::invalid_argument("need at least 2 folds");
  if (song_ids.size() < static_cast<std::size_t>(n_folds))
    throw DataError("fewer songs (" + std::to_string(song_ids.size()) +
                    ") than folds (" + std::to_string(n_folds) + ")");

  std::vector<std::size_t> order(song_ids.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(derive_seed(seed, "folds"));
  for (std::size_t i = order.size() - 1; i > 0; --i)
    std::swap(order[i], order[rng.uniform_int(static_cast<int>(i + 1))]);

  std::vector<int> fold(song_ids.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank)
    fold[order[rank]] = static_cast<int>(rank % n_folds);
  return fold;
}

}  // namespace chordtm
