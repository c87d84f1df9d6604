#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace chordtm {

// Negative-binomial chord duration model. A chord lasting d frames is k = d -
// stages successes before the stages-th failure, so the minimum representable
// duration is `stages` frames. Realized in the decoder as a left-to-right
// chain of `stages` states, each with self-loop 1 - advance_prob and advance
// advance_prob.
struct DurationModel {
  int stages = 2;            // K
  double advance_prob = 0.1;  // p

  // Mean duration of the distribution: stages / advance_prob.
  double mean() const { return stages / advance_prob; }
};

// log PMF at duration d (frames); kLogZero for d < stages. Evaluated through
// lgamma so it stays finite up to d ~ 1e6.
double log_nb_pmf(const DurationModel& model, long long duration);
double nb_pmf(const DurationModel& model, long long duration);

// Per-stage chain parameters of the duration Markov chain.
struct StageChain {
  int stages;
  double stay;     // 1 - p
  double advance;  // p
};
StageChain stage_chain(const DurationModel& model);

// MLE over stages in [1, min(max_stages, min duration)] with the closed-form
// advance probability stages/mean(durations) per candidate, clamped to
// [1e-6, 1-1e-6]. Ties go to fewer stages.
DurationModel fit_duration(std::span<const int> durations, int max_stages = 16);

// Total log-likelihood of the durations under the model.
double duration_log_likelihood(const DurationModel& model,
                               std::span<const int> durations);

// "K=<int>\np=<decimal>" text format.
void save_duration(const std::filesystem::path& path,
                   const DurationModel& model);
DurationModel load_duration(const std::filesystem::path& path);

// CSV "duration,count" with one row per duration 1..max observed.
void write_duration_histogram(const std::filesystem::path& path,
                              std::span<const int> durations);

}  // namespace chordtm
