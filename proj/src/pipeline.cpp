#include "chordtm/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>

#include "chordtm/errors.hpp"
#include "chordtm/parallel.hpp"
#include "chordtm/posterior_io.hpp"
#include "chordtm/rng.hpp"
#include "chordtm/simulate.hpp"
#include "chordtm/state_space.hpp"
#include "chordtm/toy_model.hpp"
#include "chordtm/viterbi.hpp"
#include "chordtm/wcsr.hpp"

namespace chordtm {

std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir,
                                              const std::string& extension) {
  if (!std::filesystem::is_directory(dir))
    throw DataError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == extension)
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<Song> load_lab_corpus(const std::filesystem::path& dir,
                                  const LabParseOptions& opts, bool skip_bad,
                                  std::vector<std::string>* bad) {
  std::vector<Song> songs;
  for (const auto& path : list_files(dir, ".lab")) {
    try {
      songs.push_back({path.stem().string(), read_lab_file(path, opts)});
    } catch (const DataError& e) {
      if (!skip_bad) throw;
      if (bad) bad->push_back(e.what());
    }
  }
  return songs;
}

std::vector<std::vector<ChordSymbol>> change_sequences(
    std::span<const Song> songs) {
  std::vector<std::vector<ChordSymbol>> out;
  out.reserve(songs.size());
  for (const auto& song : songs) {
    std::vector<ChordSymbol> labels;
    labels.reserve(song.segments.size());
    for (const auto& seg : song.segments) labels.push_back(seg.label);
    out.push_back(compress(labels));
  }
  return out;
}

std::vector<int> frame_durations(std::span<const Song> songs,
                                 double frame_rate) {
  std::vector<int> durations;
  for (const auto& song : songs) {
    if (song.segments.empty()) continue;
    FrameSequence frames = sample_frames(song.segments, frame_rate);
    for (const auto& [label, len] : run_lengths(frames.labels))
      durations.push_back(len);
  }
  return durations;
}

Vector frame_marginal(std::span<const Song> songs, double frame_rate) {
  Vector counts = Vector::Zero(ChordSymbol::kNumClasses);
  for (const auto& song : songs) {
    if (song.segments.empty()) continue;
    FrameSequence frames = sample_frames(song.segments, frame_rate);
    for (ChordSymbol s : frames.labels) counts[s.index()] += 1.0;
  }
  double total = counts.sum();
  if (total <= 0.0) throw DataError("no frames in corpus");
  return counts / total;
}

SmoothingSetting parse_smoothing(const std::string& text) {
  SmoothingSetting s;
  auto colon = text.find(':');
  s.kind = text.substr(0, colon);
  if (s.kind != "none" && s.kind != "uniform" && s.kind != "unigram" &&
      s.kind != "smear")
    throw std::invalid_argument("unknown smoothing kind '" + s.kind + "'");
  if (colon != std::string::npos) {
    s.intensity = std::stod(text.substr(colon + 1));
  } else {
    s.intensity = s.kind == "smear" ? 3.0 : (s.kind == "none" ? 1.0 : 0.9);
  }
  return s;
}

namespace {

Matrix one_hot(const FrameSequence& frames) {
  Matrix out =
      Matrix::Zero(static_cast<Eigen::Index>(frames.labels.size()),
                   ChordSymbol::kNumClasses);
  for (std::size_t t = 0; t < frames.labels.size(); ++t)
    out(static_cast<Eigen::Index>(t), frames.labels[t].index()) = 1.0;
  return out;
}

Matrix smooth_one_song(const Matrix& onehot, const SmoothingSetting& setting,
                       const Vector& marginal) {
  if (setting.kind == "none") return onehot;
  if (setting.kind == "uniform")
    return smooth_targets(onehot, SmoothingSpec::uniform(setting.intensity));
  if (setting.kind == "unigram")
    return smooth_targets(onehot,
                          SmoothingSpec::unigram(setting.intensity, marginal));
  return smooth_targets(
      onehot, SmoothingSpec::smear(static_cast<int>(setting.intensity)));
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::string sweep_dump_subdir(const SmoothingSetting& smoothing,
                              double temperature) {
  return smoothing.kind + "-" + format_number(smoothing.intensity) + "_T" +
         format_number(temperature);
}

std::vector<SweepRow> run_sweep(std::span<const Song> songs,
                                const SweepConfig& config, std::ostream* log) {
  if (config.test_fold < 0 || config.test_fold >= config.n_folds)
    throw std::invalid_argument("test fold out of range");

  std::vector<std::string> names;
  names.reserve(songs.size());
  for (const auto& s : songs) names.push_back(s.name);
  std::vector<int> folds =
      make_folds(names, config.n_folds, derive_seed(config.seed, "sweep-folds"));
  const int valid_fold = (config.test_fold + 1) % config.n_folds;

  std::vector<std::size_t> train_idx, valid_idx, test_idx, fit_idx;
  for (std::size_t i = 0; i < songs.size(); ++i) {
    if (folds[i] == config.test_fold) {
      test_idx.push_back(i);
    } else {
      fit_idx.push_back(i);  // everything the acoustic model may see
      if (folds[i] == valid_fold)
        valid_idx.push_back(i);
      else
        train_idx.push_back(i);
    }
  }
  if (test_idx.empty() || train_idx.empty() || valid_idx.empty())
    throw DataError("folds left a split empty; need more songs");

  // Frames and features are fixed across the whole grid.
  std::vector<FrameSequence> frames(songs.size());
  std::vector<Matrix> features(songs.size());
  parallel_for(songs.size(), config.jobs, [&](std::size_t i) {
    frames[i] = sample_frames(songs[i].segments, config.frame_rate);
    features[i] = chroma_features(
        frames[i], config.feature_noise,
        derive_seed(config.seed, "sweep-features", static_cast<std::uint64_t>(i)));
  });

  auto subset = [&](const std::vector<std::size_t>& indices) {
    std::vector<Song> out;
    for (auto i : indices) out.push_back(songs[i]);
    return out;
  };
  std::vector<Song> train_songs = subset(train_idx);
  std::vector<Song> valid_songs = subset(valid_idx);
  std::vector<Song> fit_songs = subset(fit_idx);

  DurationModel dm =
      fit_duration(frame_durations(fit_songs, config.frame_rate),
                   config.max_stages);
  Vector marginal = frame_marginal(fit_songs, config.frame_rate);

  // One state space per decoding mode.
  std::map<std::string, std::optional<StateSpace>> spaces;
  auto train_seqs = change_sequences(train_songs);
  auto valid_seqs = change_sequences(valid_songs);
  for (const std::string& mode : config.modes) {
    if (mode == "none") {
      spaces.emplace(mode, std::nullopt);
    } else if (mode == "dur") {
      spaces.emplace(mode, StateSpace(uniform_change_model(), dm));
    } else {
      int order = std::stoi(mode);
      double alpha =
          select_alpha(train_seqs, valid_seqs, order, config.alpha_grid);
      NGramModel lm = fit_ngram(train_seqs, order, alpha);
      spaces.emplace(mode, StateSpace(lm, dm));
      if (log)
        *log << "mode " << mode << ": alpha " << alpha << "\n";
    }
  }

  std::vector<SweepRow> rows;
  for (const SmoothingSetting& smoothing : config.smoothings) {
    // Train the toy acoustic model on every non-test song.
    Eigen::Index fit_rows = 0;
    for (auto i : fit_idx)
      fit_rows += static_cast<Eigen::Index>(frames[i].labels.size());
    Matrix x(fit_rows, 12), y(fit_rows, ChordSymbol::kNumClasses);
    Eigen::Index at = 0;
    for (auto i : fit_idx) {
      Matrix targets = smooth_one_song(one_hot(frames[i]), smoothing, marginal);
      x.middleRows(at, targets.rows()) = features[i];
      y.middleRows(at, targets.rows()) = targets;
      at += targets.rows();
    }
    LinearSoftmaxModel toy =
        train_toy_model(x, y, config.epochs, config.learning_rate);

    std::vector<Matrix> raw(test_idx.size());
    parallel_for(test_idx.size(), config.jobs, [&](std::size_t j) {
      raw[j] = toy.predict(features[test_idx[j]]);
    });

    for (double temperature : config.temperatures) {
      std::vector<PosteriorMatrix> calibrated(test_idx.size());
      for (std::size_t j = 0; j < test_idx.size(); ++j) {
        calibrated[j].frame_rate = config.frame_rate;
        calibrated[j].values = apply_temperature(raw[j], temperature);
      }
      if (!config.dump_dir.empty()) {
        auto dir = config.dump_dir / sweep_dump_subdir(smoothing, temperature);
        std::filesystem::create_directories(dir);
        for (std::size_t j = 0; j < test_idx.size(); ++j)
          write_posterior_csv(dir / (songs[test_idx[j]].name + ".csv"),
                              calibrated[j]);
      }

      for (const std::string& mode : config.modes) {
        SweepRow row{temperature, smoothing.kind, smoothing.intensity, mode,
                     0.0, ""};
        try {
          std::vector<WCSRReport> reports(test_idx.size());
          const auto& space = spaces.at(mode);
          parallel_for(test_idx.size(), config.jobs, [&](std::size_t j) {
            std::vector<AnnotatedSegment> estimate;
            if (!space) {
              FrameSequence f;
              f.frame_rate = config.frame_rate;
              f.labels = argmax_labels(calibrated[j].values);
              estimate = to_segments(f);
            } else {
              estimate = viterbi(*space, calibrated[j]).segments;
            }
            reports[j] = wcsr(songs[test_idx[j]].segments, estimate);
          });
          row.wcsr_value = aggregate(reports).wcsr();
        } catch (const std::exception& e) {
          if (!config.keep_going) throw;
          row.error = e.what();
        }
        if (log)
          *log << "smoothing " << smoothing.kind << ":" << smoothing.intensity
               << " T " << temperature << " mode " << mode << " wcsr "
               << row.wcsr_value << (row.error.empty() ? "" : " FAILED")
               << "\n";
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void write_sweep_csv(const std::filesystem::path& path,
                     std::span<const SweepRow> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write sweep file: " + path.string());
  out << "temperature,smoothing,intensity,lm_mode,wcsr,error\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%g,%s,%g,%s,%.6f,%s\n", row.temperature,
                  row.smoothing.c_str(), row.intensity, row.mode.c_str(),
                  row.wcsr_value, row.error.c_str());
    out << buf;
  }
}

}  // namespace chordtm
