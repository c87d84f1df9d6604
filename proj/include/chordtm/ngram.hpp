#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "chordtm/chord.hpp"

namespace chordtm {

// N-gram model over chord change-sequences with Lidstone smoothing.
//
// Histories are tuples of length order-1 over chord class codes plus a
// dedicated start token, ordered oldest to newest. Each sequence is
// left-padded with order-1 start tokens before counting, which makes the
// model a proper distribution over first chords as well.
//
// Change-sequences never repeat a symbol, so the successor support of a
// history excludes its most recent real chord: M = vocab-1 legal successors
// once a real chord has been seen, M = vocab for the all-start history.
// prob() returns (count + alpha) / (total + alpha * M); a history with no
// counts at all falls back to 1/M, which is the alpha-independent value the
// Lidstone estimate takes for every alpha > 0.
class NGramModel {
 public:
  static constexpr int kStartToken = ChordSymbol::kNumClasses;  // 25
  static constexpr int kMaxOrder = 13;  // history must pack into 64 bits

  NGramModel(int order, double alpha, int vocab = ChordSymbol::kNumClasses);

  int order() const { return order_; }
  double alpha() const { return alpha_; }
  void set_alpha(double alpha);
  int vocab() const { return vocab_; }

  // Counts the events of one compressed sequence (throws invalid_argument on
  // adjacent duplicates: that is a caller bug, not data).
  void observe(std::span<const ChordSymbol> change_sequence);

  // history: codes oldest to newest, length order-1 exactly.
  double prob(std::span<const int> history, int next) const;
  double log_prob(std::span<const int> history, int next) const;
  double count(std::span<const int> history, int next) const;

  // Number of legal successors M for this history.
  int legal_successor_count(std::span<const int> history) const;

  // The forbidden successor (most recent real chord of the history), or -1.
  int forbidden_successor(std::span<const int> history) const;

  std::size_t history_count() const { return counts_.size(); }

  struct CountEntry {
    std::vector<int> history;  // oldest to newest
    int next;
    double count;
  };
  // All stored counts, sorted; used by serialization and recount oracles.
  std::vector<CountEntry> entries() const;

 private:
  std::uint64_t pack(std::span<const int> history) const;
  std::vector<int> unpack(std::uint64_t key) const;

  int order_;
  int vocab_;
  double alpha_;
  std::unordered_map<std::uint64_t, Eigen::ArrayXd> counts_;

  friend NGramModel load_ngram(const std::filesystem::path&);
};

// Fits by counting; alpha only matters at query time.
NGramModel fit_ngram(const std::vector<std::vector<ChordSymbol>>& sequences,
                     int order, double alpha,
                     int vocab = ChordSymbol::kNumClasses);

// exp(-mean log prob) over every symbol given its padded history. Returns
// +infinity if any event has zero probability (alpha = 0 on unseen events).
double perplexity(const NGramModel& model,
                  const std::vector<std::vector<ChordSymbol>>& sequences);

// Per-alpha validation perplexities, in grid order.
std::vector<double> alpha_perplexities(
    const std::vector<std::vector<ChordSymbol>>& train,
    const std::vector<std::vector<ChordSymbol>>& valid, int order,
    std::span<const double> grid);

// Grid value minimizing validation perplexity, ties toward smaller alpha.
double select_alpha(const std::vector<std::vector<ChordSymbol>>& train,
                    const std::vector<std::vector<ChordSymbol>>& valid,
                    int order, std::span<const double> grid);

inline constexpr std::array<double, 5> kDefaultAlphaGrid = {0.001, 0.01, 0.1,
                                                            0.5, 1.0};

// Versioned plain-text serialization; round-trips losslessly.
void save_ngram(const std::filesystem::path& path, const NGramModel& model);
NGramModel load_ngram(const std::filesystem::path& path);

// Pads the first order-1 positions with start tokens and yields each
// (history, next) event of a sequence; shared by counting and scoring.
template <typename Fn>
void for_each_event(std::span<const ChordSymbol> sequence, int order, Fn&& fn) {
  std::vector<int> padded(order - 1, NGramModel::kStartToken);
  padded.reserve(order - 1 + sequence.size());
  for (ChordSymbol s : sequence) padded.push_back(s.index());
  for (std::size_t i = order - 1; i < padded.size(); ++i)
    fn(std::span<const int>(padded.data() + i - (order - 1),
                            static_cast<std::size_t>(order - 1)),
       padded[i]);
}

}  // namespace chordtm
