#include "chordtm/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "chordtm/errors.hpp"

namespace chordtm {

namespace {

constexpr std::uint64_t kPackBase = 27;

std::uint64_t pack_codes(std::span<const int> codes) {
  std::uint64_t key = 1;  // leading 1 disambiguates lengths
  for (int c : codes) key = key * kPackBase + static_cast<std::uint64_t>(c) + 1;
  return key;
}

// All tuples (c0..c_{N-1}) with c0 a real chord, no equal adjacent reals, and
// start tokens only as a suffix; lexicographic in the codes (start sorts
// last, code == vocab).
void enumerate_histories(int order, int vocab, std::vector<int>& out) {
  std::vector<int> tuple(order);
  auto recurse = [&](auto&& self, int pos) -> void {
    if (pos == order) {
      out.insert(out.end(), tuple.begin(), tuple.end());
      return;
    }
    if (pos > 0 && tuple[pos - 1] == vocab) {  // start implies start suffix
      tuple[pos] = vocab;
      self(self, pos + 1);
      return;
    }
    for (int c = 0; c < vocab; ++c) {
      if (pos > 0 && c == tuple[pos - 1]) continue;
      tuple[pos] = c;
      self(self, pos + 1);
    }
    if (pos > 0) {
      tuple[pos] = vocab;  // begin start padding
      self(self, pos + 1);
    }
  };
  recurse(recurse, 0);
}

}  // namespace

StateSpace::StateSpace(const NGramModel& lm, const DurationModel& dm)
    : order_(lm.order()),
      stages_(dm.stages),
      vocab_(lm.vocab()),
      advance_prob_(dm.advance_prob) {
  if (stages_ < 1) throw std::invalid_argument("duration stages must be >= 1");
  if (advance_prob_ <= 0.0 || advance_prob_ >= 1.0)
    throw std::invalid_argument("advance probability must be in (0, 1)");
  log_stay_ = std::log1p(-advance_prob_);
  log_advance_ = std::log(advance_prob_);

  enumerate_histories(order_, vocab_, history_codes_);
  const int n_hist = static_cast<int>(history_codes_.size()) / order_;
  chord_.resize(n_hist);
  for (int h = 0; h < n_hist; ++h) chord_[h] = history_codes_[h * order_];

  // Prefix groups: h'[0..N-2] keys, ids in first-appearance order.
  std::unordered_map<std::uint64_t, int> group_ids;
  out_group_.resize(n_hist);
  for (int h = 0; h < n_hist; ++h) {
    std::uint64_t key = pack_codes(history(h).subspan(0, order_ - 1));
    auto [it, inserted] =
        group_ids.try_emplace(key, static_cast<int>(group_ids.size()));
    out_group_[h] = it->second;
  }
  group_dests_.resize(group_ids.size());
  in_group_.resize(n_hist);
  for (int h = 0; h < n_hist; ++h) {
    std::uint64_t key = pack_codes(history(h).subspan(1, order_ - 1));
    auto it = group_ids.find(key);
    in_group_[h] = it == group_ids.end() ? -1 : it->second;
    if (in_group_[h] >= 0) group_dests_[in_group_[h]].push_back(h);
  }

  // Language-model weights. The history tuple stores newest first and pads
  // with code == vocab; the model wants oldest first and its own start token.
  log_change_in_.resize(n_hist);
  log_change_out_.resize(n_hist);
  init_log_.resize(n_hist);
  auto lm_code = [this](int c) {
    return c == vocab_ ? NGramModel::kStartToken : c;
  };
  std::vector<int> lm_hist(order_ - 1);
  std::vector<int> start_hist(order_ - 1, NGramModel::kStartToken);
  for (int h = 0; h < n_hist; ++h) {
    auto codes = history(h);
    for (int j = 0; j < order_ - 1; ++j)
      lm_hist[j] = lm_code(codes[order_ - 1 - j]);
    log_change_in_[h] = safe_log(lm.prob(lm_hist, chord_[h]));

    for (int j = 0; j < order_ - 1; ++j)
      lm_hist[j] = lm_code(codes[order_ - 2 - j]);
    double legal_mass = 0.0;
    for (int y = 0; y < vocab_; ++y)
      if (y != chord_[h]) legal_mass += lm.prob(lm_hist, y);
    log_change_out_[h] = legal_mass > 0.0
                             ? log_advance_ - std::log(legal_mass)
                             : kLogZero;

    bool all_start_past = order_ == 1 || codes[1] == vocab_;
    init_log_[h] =
        all_start_past ? safe_log(lm.prob(start_hist, chord_[h])) : kLogZero;
  }
}

int StateSpace::full_history_state_count() const {
  int n = 0;
  for (int h = 0; h < history_count(); ++h) {
    auto codes = history(h);
    if (std::find(codes.begin(), codes.end(), vocab_) == codes.end()) ++n;
  }
  return n * stages_;
}

int StateSpace::history_index(std::span<const int> codes) const {
  // Binary search works because histories are enumerated lexicographically.
  int lo = 0, hi = history_count() - 1;
  while (lo <= hi) {
    int mid = (lo + hi) / 2;
    auto mid_codes = history(mid);
    int cmp = 0;
    for (int j = 0; j < order_ && cmp == 0; ++j)
      cmp = mid_codes[j] - codes[j];
    if (cmp == 0) return mid;
    if (cmp < 0)
      lo = mid + 1;
    else
      hi = mid - 1;
  }
  return -1;
}

Vector StateSpace::initial_log_distribution() const {
  Vector init = Vector::Constant(state_count(), kLogZero);
  for (int h = 0; h < history_count(); ++h)
    if (init_log_[h] > kLogZero) init[state_of(h, 1)] = init_log_[h];
  return init;
}

std::vector<StateSpace::Arc> StateSpace::outgoing_arcs(int state) const {
  std::vector<Arc> arcs;
  int h = state / stages_;
  int k = state % stages_;  // 0-based stage
  arcs.push_back({state, state, log_stay_});
  if (k + 1 < stages_) {
    arcs.push_back({state, state + 1, log_advance_});
  } else {
    for (int hd : group_dests_[out_group_[h]]) {
      if (order_ == 1 && chord_[hd] == chord_[h]) continue;
      arcs.push_back({state, state_of(hd, 1),
                      log_change_out_[h] + log_change_in_[hd]});
    }
  }
  std::sort(arcs.begin(), arcs.end(),
            [](const Arc& a, const Arc& b) { return a.target < b.target; });
  return arcs;
}

StateSpace build_state_space(const NGramModel& lm, const DurationModel& dm) {
  return StateSpace(lm, dm);
}

NGramModel uniform_change_model(int vocab) {
  return NGramModel(1, 1.0, vocab);
}

}  // namespace chordtm
