#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <vector>

#include "chordtm/duration.hpp"
#include "chordtm/errors.hpp"
#include "chordtm/rng.hpp"
#include "chordtm/simulate.hpp"
#include "chordtm/types.hpp"

using namespace chordtm;

namespace {

// NB sampler independent of the decoder's stage chain: the total duration is
// stages plus a sum of `stages` geometric(p) success counts.
int sample_nb_direct(const DurationModel& m, Rng& rng) {
  int d = m.stages;
  for (int i = 0; i < m.stages; ++i) {
    double u = 1.0 - rng.uniform();  // (0, 1]
    d += static_cast<int>(std::floor(std::log(u) / std::log1p(-m.advance_prob)));
  }
  return d;
}

}  // namespace

TEST_CASE("single-stage model is geometric") {
  DurationModel m{1, 0.3};
  for (int d = 1; d <= 20; ++d)
    CHECK(nb_pmf(m, d) ==
          doctest::Approx(0.3 * std::pow(0.7, d - 1)).epsilon(1e-12));
}

TEST_CASE("pmf hand values and the minimum duration") {
  DurationModel m{2, 0.5};
  CHECK(nb_pmf(m, 2) == doctest::Approx(0.25));  // k=0: C(1,1) 0.25 1
  CHECK(nb_pmf(m, 1) == 0.0);
  CHECK(nb_pmf(m, 3) == doctest::Approx(2 * 0.25 * 0.5));  // C(2,1) p^2 (1-p)
  CHECK(log_nb_pmf(m, 1) == kLogZero);
}

TEST_CASE("log pmf stays finite far into the tail") {
  DurationModel m{2, 0.1};
  for (long long d : {1000LL, 100000LL, 1000000LL}) {
    double lp = log_nb_pmf(m, d);
    CHECK(std::isfinite(lp));
    CHECK(lp < 0.0);
    CHECK(lp > kLogZero);
  }
}

TEST_CASE("pmf mass accumulates to one") {
  for (auto [stages, p] : std::vector<std::pair<int, double>>{
           {1, 0.5}, {2, 0.1}, {3, 0.04}, {1, 0.001}}) {
    DurationModel m{stages, p};
    long long horizon = std::llround(30.0 * m.mean()) + 100;
    double total = 0.0;
    for (long long d = 1; d <= horizon; ++d) total += nb_pmf(m, d);
    CHECK(total >= 1.0 - 1e-6);
    CHECK(total <= 1.0 + 1e-9);
  }
}

TEST_CASE("stage chain parameters") {
  StageChain chain = stage_chain({3, 0.4});
  CHECK(chain.stages == 3);
  CHECK(chain.stay == doctest::Approx(0.6));
  CHECK(chain.advance == doctest::Approx(0.4));

  StageChain single = stage_chain({1, 0.25});
  CHECK(single.stages == 1);
}

TEST_CASE("chain dwell times follow the pmf (Monte Carlo)") {
  DurationModel m{2, 0.3};
  Rng rng(1234);
  const int n = 100000;
  std::vector<double> hist(200, 0.0);
  for (int i = 0; i < n; ++i) {
    int d = sample_duration(m, rng);
    if (d < static_cast<int>(hist.size())) hist[d] += 1.0 / n;
  }
  double tv = 0.0;
  for (std::size_t d = 1; d < hist.size(); ++d)
    tv += std::abs(hist[d] - nb_pmf(m, static_cast<long long>(d)));
  CHECK(tv / 2 <= 0.01);
}

TEST_CASE("closed-form fit for fixed stages") {
  std::vector<int> fives(40, 5);
  DurationModel m = fit_duration(fives, 1);
  CHECK(m.stages == 1);
  CHECK(m.advance_prob == doctest::Approx(0.2));  // 1 / mean
}

TEST_CASE("fit recovers seeded negative-binomial parameters") {
  DurationModel truth{2, 0.1};
  Rng rng(77);
  std::vector<int> durations;
  durations.reserve(10000);
  for (int i = 0; i < 10000; ++i) durations.push_back(sample_nb_direct(truth, rng));

  DurationModel fitted = fit_duration(durations);
  CHECK(fitted.stages == 2);
  CHECK(std::abs(fitted.advance_prob - 0.1) <= 0.01);

  // The closed-form MLE matches the sample mean exactly.
  double mean = std::accumulate(durations.begin(), durations.end(), 0.0) /
                durations.size();
  CHECK(fitted.mean() == doctest::Approx(mean).epsilon(1e-6));

  // Brute-force grid oracle: no (stages, p) beats the fit.
  double best_ll = duration_log_likelihood(fitted, durations);
  int min_d = *std::min_element(durations.begin(), durations.end());
  for (int stages = 1; stages <= std::min(16, min_d); ++stages)
    for (int pi = 1; pi <= 999; ++pi) {
      DurationModel cand{stages, pi / 1000.0};
      CHECK(duration_log_likelihood(cand, durations) <= best_ll + 1e-6);
    }
}

TEST_CASE("degenerate corpora still produce a valid clamped model") {
  std::vector<int> ones(10, 1);
  DurationModel m = fit_duration(ones);
  CHECK(m.stages == 1);
  CHECK(m.advance_prob <= 1.0 - 1e-6);
  CHECK(m.advance_prob >= 1e-6);
  CHECK_THROWS_AS(fit_duration({}), std::invalid_argument);
  CHECK_THROWS_AS(fit_duration(std::vector<int>{0, 3}), std::invalid_argument);
}

TEST_CASE("duration model file format") {
  auto dir = std::filesystem::temp_directory_path() / "chordtm_dur_test";
  std::filesystem::create_directories(dir);
  DurationModel m{2, 0.0925};
  save_duration(dir / "dur.txt", m);
  DurationModel back = load_duration(dir / "dur.txt");
  CHECK(back.stages == 2);
  CHECK(back.advance_prob == m.advance_prob);

  std::vector<int> durations = {3, 1, 4, 1, 5, 9, 2, 6};
  write_duration_histogram(dir / "hist.csv", durations);
  std::ifstream in(dir / "hist.csv");
  std::string line;
  int rows = -1;  // header
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 9);  // one row per duration 1..max observed
  std::filesystem::remove_all(dir);
}
