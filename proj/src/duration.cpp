#include "chordtm/duration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <string>

#include "chordtm/errors.hpp"
#include "chordtm/types.hpp"

namespace chordtm {

double log_nb_pmf(const DurationModel& model, long long duration) {
  if (duration < model.stages) return kLogZero;
  double k = static_cast<double>(duration - model.stages);
  double kk = static_cast<double>(model.stages);
  // log C(k+K-1, K-1) = lgamma(k+K) - lgamma(K) - lgamma(k+1)
  double log_binom = std::lgamma(k + kk) - std::lgamma(kk) - std::lgamma(k + 1.0);
  return log_binom + kk * std::log(model.advance_prob) +
         k * std::log1p(-model.advance_prob);
}

double nb_pmf(const DurationModel& model, long long duration) {
  double lp = log_nb_pmf(model, duration);
  return lp <= kLogZero ? 0.0 : std::exp(lp);
}

StageChain stage_chain(const DurationModel& model) {
  return {model.stages, 1.0 - model.advance_prob, model.advance_prob};
}

double duration_log_likelihood(const DurationModel& model,
                               std::span<const int> durations) {
  double ll = 0.0;
  for (int d : durations) ll += log_nb_pmf(model, d);
  return ll;
}

DurationModel fit_duration(std::span<const int> durations, int max_stages) {
  if (durations.empty())
    throw std::invalid_argument("cannot fit duration model on no durations");
  int min_d = *std::min_element(durations.begin(), durations.end());
  if (min_d < 1) throw std::invalid_argument("durations must be >= 1 frame");
  double mean = std::accumulate(durations.begin(), durations.end(), 0.0) /
                static_cast<double>(durations.size());

  DurationModel best;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int stages = 1; stages <= std::min(max_stages, min_d); ++stages) {
    DurationModel cand;
    cand.stages = stages;
    cand.advance_prob = std::clamp(stages / mean, 1e-6, 1.0 - 1e-6);
    double ll = duration_log_likelihood(cand, durations);
    if (ll > best_ll) {
      best_ll = ll;
      best = cand;
    }
  }
  return best;
}

void save_duration(const std::filesystem::path& path,
                   const DurationModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path.string());
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", model.advance_prob);
  out << "K=" << model.stages << "\np=" << buf << "\n";
}

DurationModel load_duration(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path.string());
  std::string k_line, p_line;
  if (!std::getline(in, k_line) || !std::getline(in, p_line))
    throw DataError(path.string() + ": expected K= and p= lines");
  if (!k_line.empty() && k_line.back() == '\r') k_line.pop_back();
  if (!p_line.empty() && p_line.back() == '\r') p_line.pop_back();
  if (k_line.rfind("K=", 0) != 0 || p_line.rfind("p=", 0) != 0)
    throw DataError(path.string() + ": expected K= and p= lines");
  DurationModel model;
  model.stages = std::stoi(k_line.substr(2));
  model.advance_prob = std::stod(p_line.substr(2));
  if (model.stages < 1 || model.advance_prob <= 0.0 ||
      model.advance_prob >= 1.0)
    throw DataError(path.string() + ": invalid duration model parameters");
  return model;
}

void write_duration_histogram(const std::filesystem::path& path,
                              std::span<const int> durations) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write histogram file: " + path.string());
  int max_d = durations.empty()
                  ? 0
                  : *std::max_element(durations.begin(), durations.end());
  std::vector<long long> counts(max_d + 1, 0);
  for (int d : durations) ++counts[d];
  out << "duration,count\n";
  for (int d = 1; d <= max_d; ++d) out << d << ',' << counts[d] << '\n';
}

}  // namespace chordtm
