#include "chordtm/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "chordtm/errors.hpp"
#include "chordtm/types.hpp"

namespace chordtm {

namespace {
constexpr std::uint64_t kPackBase = 27;  // vocab (25) + start token + slack

std::string token_name(int code) {
  if (code == NGramModel::kStartToken) return "<s>";
  return ChordSymbol(code).name();
}

int token_code(const std::string& tok) {
  if (tok == "<s>") return NGramModel::kStartToken;
  auto sym = reduce_chord(tok);
  if (!sym) throw DataError("bad model token '" + tok + "'");
  return sym->index();
}
}  // namespace

NGramModel::NGramModel(int order, double alpha, int vocab)
    : order_(order), vocab_(vocab), alpha_(alpha) {
  if (order < 1) throw std::invalid_argument("n-gram order must be >= 1");
  if (order > kMaxOrder) throw std::invalid_argument("n-gram order too large");
  if (alpha < 0.0) throw std::invalid_argument("pseudo-count must be >= 0");
  if (vocab < 2) throw std::invalid_argument("vocabulary too small");
}

void NGramModel::set_alpha(double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("pseudo-count must be >= 0");
  alpha_ = alpha;
}

std::uint64_t NGramModel::pack(std::span<const int> history) const {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < history.size(); ++i)
    key = key * kPackBase + static_cast<std::uint64_t>(history[i]) + 1;
  return key;
}

std::vector<int> NGramModel::unpack(std::uint64_t key) const {
  std::vector<int> history(order_ - 1);
  for (int i = order_ - 2; i >= 0; --i) {
    history[i] = static_cast<int>(key % kPackBase) - 1;
    key /= kPackBase;
  }
  return history;
}

void NGramModel::observe(std::span<const ChordSymbol> change_sequence) {
  for (std::size_t i = 1; i < change_sequence.size(); ++i)
    if (change_sequence[i] == change_sequence[i - 1])
      throw std::invalid_argument(
          "sequence has adjacent duplicates; compress() it first");
  for_each_event(change_sequence, order_, [&](std::span<const int> hist, int next) {
    auto [it, inserted] = counts_.try_emplace(pack(hist));
    if (inserted) it->second = Eigen::ArrayXd::Zero(vocab_);
    it->second[next] += 1.0;
  });
}

int NGramModel::forbidden_successor(std::span<const int> history) const {
  for (auto it = history.rbegin(); it != history.rend(); ++it)
    if (*it != kStartToken) return *it;
  return -1;
}

int NGramModel::legal_successor_count(std::span<const int> history) const {
  return vocab_ - (forbidden_successor(history) >= 0 ? 1 : 0);
}

double NGramModel::prob(std::span<const int> history, int next) const {
  if (static_cast<int>(history.size()) != order_ - 1)
    throw std::invalid_argument("history length must be order-1");
  int forbidden = forbidden_successor(history);
  if (next == forbidden) return 0.0;
  int m = vocab_ - (forbidden >= 0 ? 1 : 0);
  auto it = counts_.find(pack(history));
  if (it == counts_.end()) return 1.0 / m;
  double total = it->second.sum();
  if (total + alpha_ == 0.0) return 1.0 / m;
  return (it->second[next] + alpha_) / (total + alpha_ * m);
}

double NGramModel::log_prob(std::span<const int> history, int next) const {
  return safe_log(prob(history, next));
}

double NGramModel::count(std::span<const int> history, int next) const {
  auto it = counts_.find(pack(history));
  return it == counts_.end() ? 0.0 : it->second[next];
}

std::vector<NGramModel::CountEntry> NGramModel::entries() const {
  std::vector<std::uint64_t> keys;
  keys.reserve(counts_.size());
  for (const auto& [key, row] : counts_) keys.push_back(key);
  std::sort(keys.begin(), keys.end());

  std::vector<CountEntry> out;
  for (std::uint64_t key : keys) {
    const Eigen::ArrayXd& row = counts_.at(key);
    for (int next = 0; next < vocab_; ++next)
      if (row[next] > 0.0) out.push_back({unpack(key), next, row[next]});
  }
  return out;
}

NGramModel fit_ngram(const std::vector<std::vector<ChordSymbol>>& sequences,
                     int order, double alpha, int vocab) {
  NGramModel model(order, alpha, vocab);
  for (const auto& seq : sequences) model.observe(seq);
  return model;
}

double perplexity(const NGramModel& model,
                  const std::vector<std::vector<ChordSymbol>>& sequences) {
  double log_total = 0.0;
  std::size_t events = 0;
  bool impossible = false;
  for (const auto& seq : sequences) {
    for_each_event(seq, model.order(), [&](std::span<const int> hist, int next) {
      double p = model.prob(hist, next);
      if (p <= 0.0)
        impossible = true;
      else
        log_total += std::log(p);
      ++events;
    });
  }
  if (events == 0)
    throw std::invalid_argument("perplexity needs at least one event");
  if (impossible) return std::numeric_limits<double>::infinity();
  return std::exp(-log_total / static_cast<double>(events));
}

std::vector<double> alpha_perplexities(
    const std::vector<std::vector<ChordSymbol>>& train,
    const std::vector<std::vector<ChordSymbol>>& valid, int order,
    std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("alpha grid is empty");
  NGramModel model = fit_ngram(train, order, grid.front());
  std::vector<double> out;
  out.reserve(grid.size());
  for (double alpha : grid) {
    model.set_alpha(alpha);
    out.push_back(perplexity(model, valid));
  }
  return out;
}

double select_alpha(const std::vector<std::vector<ChordSymbol>>& train,
                    const std::vector<std::vector<ChordSymbol>>& valid,
                    int order, std::span<const double> grid) {
  std::vector<double> ppl = alpha_perplexities(train, valid, order, grid);
  std::vector<std::size_t> idx(grid.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });
  std::size_t best = idx[0];
  for (std::size_t i : idx)
    if (ppl[i] < ppl[best]) best = i;
  return grid[best];
}

void save_ngram(const std::filesystem::path& path, const NGramModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path.string());
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", model.alpha());
  out << "chordtm-ngram v1\n"
      << "order " << model.order() << "\n"
      << "alpha " << buf << "\n"
      << "vocab " << model.vocab() << "\n";
  for (const auto& entry : model.entries()) {
    for (int code : entry.history) out << token_name(code) << ' ';
    std::snprintf(buf, sizeof(buf), "%.17g", entry.count);
    out << token_name(entry.next) << ' ' << buf << '\n';
  }
}

NGramModel load_ngram(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path.string());
  std::string line;
  if (!std::getline(in, line) ||
      (line != "chordtm-ngram v1" && line != "chordtm-ngram v1\r"))
    throw DataError(path.string() + ": not a chordtm-ngram v1 file");

  std::string key;
  int order = 0, vocab = 0;
  double alpha = 0.0;
  in >> key >> order;
  if (key != "order") throw DataError(path.string() + ": missing order");
  in >> key >> alpha;
  if (key != "alpha") throw DataError(path.string() + ": missing alpha");
  in >> key >> vocab;
  if (key != "vocab") throw DataError(path.string() + ": missing vocab");

  NGramModel model(order, alpha, vocab);
  auto checked_code = [&](const std::string& tok, bool successor) {
    int code = token_code(tok);
    if (code >= vocab && (successor || code != NGramModel::kStartToken))
      throw DataError(path.string() + ": token '" + tok +
                      "' outside the model vocabulary");
    return code;
  };
  std::vector<std::string> tokens(order + 1);
  while (in >> tokens[0]) {
    for (int i = 1; i <= order; ++i)
      if (!(in >> tokens[i]))
        throw DataError(path.string() + ": truncated count line");
    std::vector<int> history(order - 1);
    for (int i = 0; i < order - 1; ++i)
      history[i] = checked_code(tokens[i], false);
    int next = checked_code(tokens[order - 1], true);
    double count = std::stod(tokens[order]);
    auto [it, inserted] = model.counts_.try_emplace(model.pack(history));
    if (inserted) it->second = Eigen::ArrayXd::Zero(vocab);
    it->second[next] = count;
  }
  return model;
}

}  // namespace chordtm
