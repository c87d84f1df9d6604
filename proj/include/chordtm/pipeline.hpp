#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "chordtm/calibrate.hpp"
#include "chordtm/duration.hpp"
#include "chordtm/frames.hpp"
#include "chordtm/lab.hpp"
#include "chordtm/ngram.hpp"

namespace chordtm {

struct Song {
  std::string name;  // file stem
  std::vector<AnnotatedSegment> segments;
};

// All .lab files under `dir` (sorted by name, one song each). With skip_bad,
// unparseable files are collected into *bad instead of aborting the load.
std::vector<Song> load_lab_corpus(const std::filesystem::path& dir,
                                  const LabParseOptions& opts = {},
                                  bool skip_bad = false,
                                  std::vector<std::string>* bad = nullptr);

std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir,
                                              const std::string& extension);

// Compressed chord sequence of each song: the language-model training data.
std::vector<std::vector<ChordSymbol>> change_sequences(
    std::span<const Song> songs);

// Segment lengths in frames after sampling each song at the given rate: the
// duration-model training data.
std::vector<int> frame_durations(std::span<const Song> songs,
                                 double frame_rate);

// Frame-level class distribution of a corpus (unigram smoothing's marginal).
Vector frame_marginal(std::span<const Song> songs, double frame_rate);

// One target-smoothing setting of a sweep; "none" means unsmoothed one-hot
// targets, intensity is beta for uniform/unigram and the window for smear.
struct SmoothingSetting {
  std::string kind = "none";
  double intensity = 1.0;
};
SmoothingSetting parse_smoothing(const std::string& text);  // "uniform:0.9"

struct SweepConfig {
  std::vector<double> temperatures{1.0};
  std::vector<SmoothingSetting> smoothings{{"none", 1.0}};
  std::vector<std::string> modes{"none", "dur", "2"};  // none|dur|<order>
  int n_folds = 4;
  int test_fold = 0;
  double frame_rate = kDefaultFrameRate;
  double feature_noise = 0.8;
  int epochs = 300;
  double learning_rate = 2.0;
  int max_stages = 16;
  std::vector<double> alpha_grid{kDefaultAlphaGrid.begin(),
                                 kDefaultAlphaGrid.end()};
  std::uint64_t seed = 1;
  int jobs = 1;
  bool keep_going = false;
  std::filesystem::path dump_dir;  // when set, per-cell posteriors are dumped
};

struct SweepRow {
  double temperature = 1.0;
  std::string smoothing = "none";
  double intensity = 1.0;
  std::string mode = "none";
  double wcsr_value = 0.0;
  std::string error;  // non-empty if the cell failed under keep_going
};

// The full desk-scale experiment: split songs into folds, train the toy
// acoustic model per smoothing setting on chroma features of the train
// folds, calibrate its test-fold posteriors per temperature, decode per
// language-model mode, and pool WCSR over the test fold. Rows come out in
// grid order (smoothing, temperature, mode).
std::vector<SweepRow> run_sweep(std::span<const Song> songs,
                                const SweepConfig& config,
                                std::ostream* log = nullptr);

// Subdirectory name under SweepConfig::dump_dir holding the calibrated
// test-fold posteriors of one (smoothing, temperature) cell.
std::string sweep_dump_subdir(const SmoothingSetting& smoothing,
                              double temperature);

void write_sweep_csv(const std::filesystem::path& path,
                     std::span<const SweepRow> rows);

}  // namespace chordtm
