#include "chordtm/viterbi.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "chordtm/errors.hpp"

namespace chordtm {

namespace {

// Per-state backtrack codes, 2 bits each: how the optimum entered the state.
enum : std::uint8_t { kStay = 0, kAdvance = 1, kChange = 2 };

class BacktrackCodes {
 public:
  BacktrackCodes(std::size_t frames, std::size_t states)
      : states_(states), bytes_((frames * states + 3) / 4, 0) {}

  void set(std::size_t t, std::size_t s, std::uint8_t code) {
    std::size_t idx = t * states_ + s;
    std::size_t shift = (idx & 3) * 2;
    bytes_[idx >> 2] =
        static_cast<std::uint8_t>((bytes_[idx >> 2] & ~(3u << shift)) |
                                  (static_cast<unsigned>(code) << shift));
  }
  std::uint8_t get(std::size_t t, std::size_t s) const {
    std::size_t idx = t * states_ + s;
    return (bytes_[idx >> 2] >> ((idx & 3) * 2)) & 3u;
  }

 private:
  std::size_t states_;
  std::vector<std::uint8_t> bytes_;
};

struct Candidate {
  double score = -std::numeric_limits<double>::infinity();
  int pred = -1;

  // Lowest predecessor state index wins exact ties.
  void offer(double s, int p) {
    if (s > score || (s == score && p >= 0 && (pred < 0 || p < pred))) {
      score = s;
      pred = p;
    }
  }
};

}  // namespace

void validate_posteriors(const Matrix& values, double tolerance) {
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    if ((values.row(r).array() < 0.0).any())
      throw DataError("posterior row " + std::to_string(r) +
                      " has a negative entry");
    double sum = values.row(r).sum();
    if (std::abs(sum - 1.0) > tolerance)
      throw DataError("posterior row " + std::to_string(r) +
                      " sums to " + std::to_string(sum) + ", not 1");
  }
}

std::vector<ChordSymbol> argmax_labels(const Matrix& values) {
  std::vector<ChordSymbol> labels;
  labels.reserve(values.rows());
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    Eigen::Index best = 0;
    values.row(r).maxCoeff(&best);
    labels.push_back(ChordSymbol(static_cast<int>(best)));
  }
  return labels;
}

DecodingResult viterbi(const StateSpace& space, const PosteriorMatrix& posteriors,
                       const DecodeOptions& opts) {
  const Matrix& post = posteriors.values;
  const auto frames = static_cast<std::size_t>(post.rows());
  if (frames == 0) throw DataError("cannot decode an empty posterior matrix");
  if (post.cols() != space.vocab())
    throw DataError("posterior has " + std::to_string(post.cols()) +
                    " classes, state space expects " +
                    std::to_string(space.vocab()));
  if (opts.validate_rows) validate_posteriors(post);
  if (opts.class_prior && opts.class_prior->size() != space.vocab())
    throw DataError("class prior size does not match vocabulary");

  const int n_hist = space.history_count();
  const int n_states = space.state_count();
  const int stages = space.stages();
  const int groups = space.group_count();
  const double log_stay = space.log_stay();
  const double log_advance = space.log_advance();
  const bool unigram = space.order() == 1;

  // Log emissions for one frame, by chord class.
  Vector log_emit(space.vocab());
  auto fill_emissions = [&](std::size_t t) {
    for (int c = 0; c < space.vocab(); ++c) {
      log_emit[c] = safe_log(post(static_cast<Eigen::Index>(t), c));
      if (opts.class_prior) log_emit[c] -= safe_log((*opts.class_prior)[c]);
    }
  };

  std::vector<double> cur(n_states), nxt(n_states);
  BacktrackCodes codes(frames, static_cast<std::size_t>(n_states));
  // Winning chord-change source per prefix group and frame; for a unigram
  // space also the runner-up with a different chord, because the best source
  // may be the destination's own chord.
  std::vector<std::int32_t> change_best(frames * groups, -1);
  std::vector<std::int32_t> change_second(unigram ? frames * groups : 0, -1);

  fill_emissions(0);
  for (int h = 0; h < n_hist; ++h) {
    double e = log_emit[space.chord_of_history(h)];
    cur[space.state_of(h, 1)] = space.init_log(h) + e;
    for (int k = 2; k <= stages; ++k)
      cur[space.state_of(h, k)] = kLogZero + e;
  }

  std::vector<double> group_score(groups);
  std::vector<double> group_second_score(unigram ? groups : 0);

  for (std::size_t t = 1; t < frames; ++t) {
    fill_emissions(t);

    // Stage-K scores folded with each source's outgoing change weight,
    // maximized per prefix group. Ascending h keeps ties at the lowest
    // predecessor index.
    std::fill(group_score.begin(), group_score.end(),
              -std::numeric_limits<double>::infinity());
    if (unigram)
      std::fill(group_second_score.begin(), group_second_score.end(),
                -std::numeric_limits<double>::infinity());
    std::int32_t* best = change_best.data() + t * groups;
    std::int32_t* second = unigram ? change_second.data() + t * groups : nullptr;
    for (int h = 0; h < n_hist; ++h) {
      double x = cur[space.state_of(h, stages)] + space.log_change_out(h);
      int g = space.out_group(h);
      if (x > group_score[g]) {
        if (unigram && best[g] >= 0 &&
            space.chord_of_history(best[g]) != space.chord_of_history(h)) {
          group_second_score[g] = group_score[g];
          second[g] = best[g];
        }
        group_score[g] = x;
        best[g] = h;
      } else if (unigram && best[g] >= 0 &&
                 space.chord_of_history(h) != space.chord_of_history(best[g]) &&
                 x > group_second_score[g]) {
        group_second_score[g] = x;
        second[g] = h;
      }
    }

    for (int h = 0; h < n_hist; ++h) {
      const double e = log_emit[space.chord_of_history(h)];
      const int s1 = space.state_of(h, 1);

      Candidate cand;
      cand.offer(cur[s1] + log_stay, s1);
      if (int g = space.in_group(h); g >= 0 && best[g] >= 0) {
        int src = best[g];
        double score = group_score[g];
        if (unigram && space.chord_of_history(src) == space.chord_of_history(h)) {
          src = second[g];
          score = group_second_score[g];
        }
        if (src >= 0)
          cand.offer(score + space.log_change_in(h), space.state_of(src, stages));
      }
      nxt[s1] = cand.score + e;
      codes.set(t, s1, cand.pred == s1 ? kStay : kChange);

      for (int k = 2; k <= stages; ++k) {
        int s = space.state_of(h, k);
        // Advance comes from s-1 < s, so it wins exact ties.
        bool advance = cur[s - 1] + log_advance >= cur[s] + log_stay;
        nxt[s] = (advance ? cur[s - 1] + log_advance : cur[s] + log_stay) + e;
        codes.set(t, s, advance ? kAdvance : kStay);
      }
    }
    cur.swap(nxt);
  }

  int best_state = 0;
  for (int s = 1; s < n_states; ++s)
    if (cur[s] > cur[best_state]) best_state = s;

  DecodingResult result;
  result.log_prob = cur[best_state];
  result.frames.frame_rate = posteriors.frame_rate;
  result.frames.labels.assign(frames, ChordSymbol::no_chord());

  int s = best_state;
  for (std::size_t t = frames; t-- > 0;) {
    result.frames.labels[t] = ChordSymbol(space.emission_chord(s));
    if (t == 0) break;
    switch (codes.get(t, s)) {
      case kStay:
        break;
      case kAdvance:
        --s;
        break;
      case kChange: {
        int g = space.in_group(s / stages);
        int src = change_best[t * groups + g];
        if (unigram &&
            space.chord_of_history(src) == space.emission_chord(s))
          src = change_second[t * groups + g];
        s = space.state_of(src, stages);
        break;
      }
    }
  }

  result.segments = to_segments(result.frames);
  return result;
}

}  // namespace chordtm
