#pragma once

#include <span>
#include <vector>

#include "chordtm/duration.hpp"
#include "chordtm/ngram.hpp"
#include "chordtm/types.hpp"

namespace chordtm {

// Flattened state space of the hierarchical HMM: a higher-order chord chain
// on top (factored into first-order form over histories with no equal
// adjacent chords) and a left-to-right duration chain below.
//
// A history is a tuple of `order` codes: codes[0] is the sounding chord,
// codes[i] the i-th previous distinct chord; start tokens fill positions not
// yet seen at the beginning of a piece. A state is (history, stage) with
// stage in [1..stages], indexed as history * stages + (stage - 1).
//
// Transitions:
//   (h, k) -> (h, k)     stay, 1 - p
//   (h, k) -> (h, k+1)   advance, p
//   (h', K) -> (h, 1)    chord change, P_L(new | shared history) * p,
//                        whenever h'[0..N-2] == h[1..N-1]
// and nothing else. Chord-change mass out of each state is renormalized over
// its legal successors, which makes every state's outgoing probabilities sum
// to exactly 1; for order >= 2 the language model already sums to 1 there
// and the factor is unity, for order 1 it conditions the unigram on the
// successor being a genuine change.
//
// Chord-change arcs into (h, 1) all carry the same language-model weight and
// their sources all share the prefix h[1..N-1], so the decoder only ever
// needs per-prefix-group maxima rather than individual arcs. The space
// stores that grouping instead of an arc list.
class StateSpace {
 public:
  StateSpace(const NGramModel& lm, const DurationModel& dm);

  int order() const { return order_; }
  int stages() const { return stages_; }
  int vocab() const { return vocab_; }
  double advance_prob() const { return advance_prob_; }
  double log_stay() const { return log_stay_; }
  double log_advance() const { return log_advance_; }

  int history_count() const { return static_cast<int>(chord_.size()); }
  int state_count() const { return history_count() * stages_; }
  // States whose history carries no start padding:
  // vocab * (vocab-1)^(order-1) * stages of them.
  int full_history_state_count() const;

  std::span<const int> history(int h) const {
    return {history_codes_.data() + static_cast<std::size_t>(h) * order_,
            static_cast<std::size_t>(order_)};
  }
  int history_index(std::span<const int> codes) const;  // -1 if absent

  int state_of(int history, int stage) const {  // stage is 1-based
    return history * stages_ + (stage - 1);
  }
  int emission_chord(int state) const { return chord_[state / stages_]; }
  int state_history(int state) const { return state / stages_; }
  int state_stage(int state) const { return state % stages_ + 1; }

  // Log initial distribution over states: stage-1 states with all-start
  // pasts, weighted by P_L(chord | start history); kLogZero elsewhere.
  Vector initial_log_distribution() const;

  struct Arc {
    int source;
    int target;
    double log_prob;
  };
  // Exact outgoing arcs of one state, targets ascending.
  std::vector<Arc> outgoing_arcs(int state) const;

  // Decoder internals: per-history weights and prefix grouping.
  int group_count() const { return static_cast<int>(group_dests_.size()); }
  int in_group(int h) const { return in_group_[h]; }
  int out_group(int h) const { return out_group_[h]; }
  double log_change_in(int h) const { return log_change_in_[h]; }
  double log_change_out(int h) const { return log_change_out_[h]; }
  double init_log(int h) const { return init_log_[h]; }
  int chord_of_history(int h) const { return chord_[h]; }

 private:
  int order_;
  int stages_;
  int vocab_;
  double advance_prob_;
  double log_stay_;
  double log_advance_;

  std::vector<int> history_codes_;       // history_count * order
  std::vector<int> chord_;               // codes_[h*order], per history
  std::vector<int> in_group_;            // group feeding (h, 1); -1 if none
  std::vector<int> out_group_;           // group this history feeds from (h, K)
  std::vector<double> log_change_in_;    // log P_L(chord | past), per history
  std::vector<double> log_change_out_;   // log p - log(legal successor mass)
  std::vector<double> init_log_;         // log P_L(chord | starts) or kLogZero
  std::vector<std::vector<int>> group_dests_;  // stage-1 targets per group
};

StateSpace build_state_space(const NGramModel& lm, const DurationModel& dm);

// The "duration chain only" language model: an unfit unigram whose smoothing
// makes every legal chord change equally likely.
NGramModel uniform_change_model(int vocab = ChordSymbol::kNumClasses);

}  // namespace chordtm
