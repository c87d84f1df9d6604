// chordtm: chord-recognition temporal modelling toolkit.
//
// Subcommands cover the full batch pipeline: train-lm fits an N-gram model
// of chord changes, fit-duration a negative-binomial duration model, decode
// runs the flattened-HMM Viterbi decoder over posterior files, eval scores
// .lab estimates with WCSR, simulate produces a synthetic corpus, and sweep
// runs the temperature x smoothing x language-model grid end to end.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "chordtm/calibrate.hpp"
#include "chordtm/duration.hpp"
#include "chordtm/errors.hpp"
#include "chordtm/frames.hpp"
#include "chordtm/ngram.hpp"
#include "chordtm/parallel.hpp"
#include "chordtm/pipeline.hpp"
#include "chordtm/posterior_io.hpp"
#include "chordtm/rng.hpp"
#include "chordtm/simulate.hpp"
#include "chordtm/state_space.hpp"
#include "chordtm/toy_model.hpp"
#include "chordtm/viterbi.hpp"
#include "chordtm/wcsr.hpp"

namespace {

using namespace chordtm;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  if (out.empty()) throw std::invalid_argument("empty list: '" + text + "'");
  return out;
}

std::vector<std::string> parse_string_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  if (out.empty()) throw std::invalid_argument("empty list: '" + text + "'");
  return out;
}

LabParseOptions lab_options(const std::string& unknown_policy) {
  LabParseOptions opts;
  if (unknown_policy == "nochord")
    opts.unknown = UnknownLabelPolicy::kNoChord;
  else if (unknown_policy != "reject")
    throw std::invalid_argument("unknown-policy must be reject or nochord");
  return opts;
}

std::vector<Song> load_corpus_or_die(const std::filesystem::path& dir,
                                     const LabParseOptions& opts,
                                     bool skip_bad) {
  std::vector<std::string> bad;
  auto songs = load_lab_corpus(dir, opts, skip_bad, &bad);
  for (const auto& msg : bad)
    std::cerr << "warning: skipping unparseable file: " << msg << "\n";
  if (songs.empty())
    throw DataError("no usable .lab files in " + dir.string());
  return songs;
}

// --- train-lm ---------------------------------------------------------

struct TrainLmArgs {
  std::string corpus;
  std::string out;
  std::string report;
  std::string alpha_grid = "0.001,0.01,0.1,0.5,1.0";
  std::string unknown_policy = "reject";
  int order = 2;
  double alpha = -1.0;  // <0: select on the validation fold
  int folds = 4;
  int valid_fold = 0;
  std::uint64_t seed = 1;
  bool skip_bad = false;
};

int run_train_lm(const TrainLmArgs& args) {
  auto songs = load_corpus_or_die(args.corpus, lab_options(args.unknown_policy),
                                  args.skip_bad);
  auto all_seqs = change_sequences(songs);

  double alpha = args.alpha;
  std::vector<double> grid;
  std::vector<double> ppls;
  std::vector<std::vector<ChordSymbol>> train_seqs;
  if (alpha >= 0.0) {
    train_seqs = all_seqs;
  } else {
    grid = parse_double_list(args.alpha_grid);
    std::vector<std::string> names;
    for (const auto& s : songs) names.push_back(s.name);
    std::vector<int> folds = make_folds(names, args.folds, args.seed);
    std::vector<std::vector<ChordSymbol>> valid_seqs;
    for (std::size_t i = 0; i < songs.size(); ++i)
      (folds[i] == args.valid_fold ? valid_seqs : train_seqs)
          .push_back(all_seqs[i]);
    ppls = alpha_perplexities(train_seqs, valid_seqs, args.order, grid);
    alpha = select_alpha(train_seqs, valid_seqs, args.order, grid);
  }

  NGramModel model = fit_ngram(train_seqs, args.order, alpha);
  save_ngram(args.out, model);
  std::cout << "order " << args.order << " alpha " << alpha << " histories "
            << model.history_count() << " -> " << args.out << "\n";

  if (!args.report.empty()) {
    std::ofstream rep(args.report, std::ios::binary);
    if (!rep) throw DataError("cannot write report: " + args.report);
    rep << "alpha,perplexity\n";
    char buf[64];
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%g,%.9g\n", grid[i], ppls[i]);
      rep << buf;
    }
    std::snprintf(buf, sizeof(buf), "selected,%g\n", alpha);
    rep << buf;
  }
  return 0;
}

// --- fit-duration -----------------------------------------------------

struct FitDurationArgs {
  std::string corpus;
  std::string out;
  std::string histogram;
  std::string unknown_policy = "reject";
  double frame_rate = kDefaultFrameRate;
  int max_stages = 16;
  bool skip_bad = false;
};

int run_fit_duration(const FitDurationArgs& args) {
  auto songs = load_corpus_or_die(args.corpus, lab_options(args.unknown_policy),
                                  args.skip_bad);
  std::vector<int> durations = frame_durations(songs, args.frame_rate);
  if (durations.empty()) throw DataError("corpus has no segments");
  if (std::adjacent_find(durations.begin(), durations.end(),
                         std::not_equal_to<>()) == durations.end())
    std::cerr << "warning: all " << durations.size()
              << " durations are equal; fitted model is degenerate\n";

  DurationModel model = fit_duration(durations, args.max_stages);
  save_duration(args.out, model);
  std::cout << "K " << model.stages << " p " << model.advance_prob << " ("
            << durations.size() << " segments, mean "
            << model.stages / model.advance_prob << " frames) -> " << args.out
            << "\n";
  if (!args.histogram.empty()) write_duration_histogram(args.histogram, durations);
  return 0;
}

// --- decode -----------------------------------------------------------

struct DecodeArgs {
  std::string posteriors;
  std::string out;
  std::string mode = "ngram";
  std::string lm;
  std::string duration;
  std::string summary;
  std::string prior_file;
  double temperature = 1.0;
  int jobs = 1;
};

Vector read_prior(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open prior file: " + path.string());
  std::string line;
  std::getline(in, line);
  auto values = parse_double_list(line);
  if (static_cast<int>(values.size()) != ChordSymbol::kNumClasses)
    throw DataError("prior file must hold " +
                    std::to_string(ChordSymbol::kNumClasses) + " values");
  Vector prior(ChordSymbol::kNumClasses);
  for (int i = 0; i < prior.size(); ++i) prior[i] = values[i];
  return prior;
}

int run_decode(const DecodeArgs& args) {
  if (args.mode != "none" && args.mode != "dur" && args.mode != "ngram")
    throw std::invalid_argument("mode must be none, dur, or ngram");

  std::optional<StateSpace> space;
  if (args.mode != "none") {
    if (args.duration.empty())
      throw std::invalid_argument("--duration is required for mode " + args.mode);
    DurationModel dm = load_duration(args.duration);
    if (args.mode == "dur") {
      space.emplace(uniform_change_model(), dm);
    } else {
      if (args.lm.empty())
        throw std::invalid_argument("--lm is required for mode ngram");
      space.emplace(load_ngram(args.lm), dm);
    }
  }

  DecodeOptions opts;
  if (!args.prior_file.empty()) opts.class_prior = read_prior(args.prior_file);

  auto files = list_files(args.posteriors, ".csv");
  if (files.empty())
    throw DataError("no posterior .csv files in " + args.posteriors);
  std::filesystem::create_directories(args.out);

  struct Row {
    std::string song;
    double log_prob;
    std::size_t frames;
  };
  std::vector<Row> rows(files.size());
  parallel_for(files.size(), args.jobs, [&](std::size_t i) {
    PosteriorMatrix post = read_posterior_csv(files[i]);
    if (args.temperature != 1.0)
      post.values = apply_temperature(post.values, args.temperature);
    std::string name = files[i].stem().string();

    std::vector<AnnotatedSegment> segments;
    double log_prob = 0.0;
    if (!space) {
      // Acoustic-only: per-frame argmax; score is the summed log posterior
      // of the picked classes.
      FrameSequence frames;
      frames.frame_rate = post.frame_rate;
      frames.labels = argmax_labels(post.values);
      for (Eigen::Index t = 0; t < post.values.rows(); ++t)
        log_prob += safe_log(post.values.row(t).maxCoeff());
      segments = to_segments(frames);
    } else {
      DecodingResult result = viterbi(*space, post, opts);
      segments = std::move(result.segments);
      log_prob = result.log_prob;
    }
    write_lab_file(std::filesystem::path(args.out) / (name + ".lab"), segments);
    rows[i] = {name, log_prob, static_cast<std::size_t>(post.values.rows())};
  });

  if (!args.summary.empty()) {
    std::ofstream out(args.summary, std::ios::binary);
    if (!out) throw DataError("cannot write summary: " + args.summary);
    for (const auto& row : rows) {
      nlohmann::json j{{"song", row.song},
                       {"mode", args.mode},
                       {"log_prob", row.log_prob},
                       {"frames", row.frames}};
      out << j.dump() << "\n";
    }
  }
  std::cout << "decoded " << files.size() << " songs (mode " << args.mode
            << ") -> " << args.out << "\n";
  return 0;
}

// --- eval -------------------------------------------------------------

struct EvalArgs {
  std::string reference;
  std::string estimate;
  std::vector<std::string> columns;  // name=dir pairs for the ablation table
  std::string out;
  std::string unknown_policy = "reject";
};

WCSRReport score_tree(const std::filesystem::path& reference_dir,
                      const std::filesystem::path& estimate_dir,
                      const LabParseOptions& opts) {
  auto estimates = list_files(estimate_dir, ".lab");
  if (estimates.empty())
    throw DataError("no estimate .lab files in " + estimate_dir.string());
  std::vector<WCSRReport> reports;
  for (const auto& est_path : estimates) {
    auto ref_path = reference_dir / est_path.filename();
    if (!std::filesystem::exists(ref_path))
      throw DataError("missing reference counterpart for " + est_path.string());
    auto ref = read_lab_file(ref_path, opts);
    auto est = read_lab_file(est_path, opts);
    WCSRReport r = wcsr(ref, est);
    r.songs.push_back({est_path.stem().string(), r.correct_seconds,
                       r.annotated_seconds});
    reports.push_back(std::move(r));
  }
  return aggregate(reports);
}

int run_eval(const EvalArgs& args) {
  auto opts = lab_options(args.unknown_policy);
  std::ofstream out(args.out, std::ios::binary);
  if (!out) throw DataError("cannot write results: " + args.out);
  char buf[160];

  if (!args.columns.empty()) {
    // Ablation table, one column per named estimate tree.
    std::vector<std::string> names;
    std::vector<double> values;
    for (const auto& col : args.columns) {
      auto eq = col.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("--column expects name=dir, got " + col);
      names.push_back(col.substr(0, eq));
      values.push_back(
          score_tree(args.reference, col.substr(eq + 1), opts).wcsr());
    }
    for (std::size_t i = 0; i < names.size(); ++i)
      out << names[i] << (i + 1 < names.size() ? ',' : '\n');
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.6f%c", values[i],
                    i + 1 < values.size() ? ',' : '\n');
      out << buf;
    }
    for (std::size_t i = 0; i < names.size(); ++i)
      std::cout << names[i] << " " << values[i] << "\n";
    return 0;
  }

  if (args.estimate.empty())
    throw std::invalid_argument("need --estimate or --column");
  WCSRReport pooled = score_tree(args.reference, args.estimate, opts);
  out << "song,t_c,t_a,wcsr\n";
  for (const auto& song : pooled.songs) {
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f\n", song.song.c_str(),
                  song.correct_seconds, song.annotated_seconds, song.ratio());
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "TOTAL,%.6f,%.6f,%.6f\n",
                pooled.correct_seconds, pooled.annotated_seconds, pooled.wcsr());
  out << buf;
  std::cout << "wcsr " << pooled.wcsr() << " over " << pooled.songs.size()
            << " songs -> " << args.out << "\n";
  return 0;
}

// --- simulate ---------------------------------------------------------

struct SimulateArgs {
  std::string out;
  int songs = 20;
  int frames = 400;
  double frame_rate = kDefaultFrameRate;
  std::uint64_t seed = 1;
  int stages = 2;
  double advance_prob = 0.1;
  double concentration = 8.0;
  double confusion_temperature = 0.3;
  double noise = 1.0;
  bool emit_frames = false;
  int jobs = 1;
};

int run_simulate(const SimulateArgs& args) {
  if (args.songs < 1 || args.frames < 1)
    throw std::invalid_argument("need at least 1 song and 1 frame");
  DurationModel dm{args.stages, args.advance_prob};
  BigramSampler sampler = BigramSampler::harmonic(args.concentration);
  std::filesystem::create_directories(args.out);

  parallel_for(static_cast<std::size_t>(args.songs), args.jobs,
               [&](std::size_t i) {
    Rng rng(derive_seed(args.seed, "song", i));
    FrameSequence truth =
        sample_song(sampler, dm, args.frames, args.frame_rate, rng);
    PosteriorMatrix post = simulate_posteriors(
        truth, args.confusion_temperature, std::max(args.noise, 1e-12),
        derive_seed(args.seed, "posteriors", i));

    char name[32];
    std::snprintf(name, sizeof(name), "song_%04zu", i);
    std::filesystem::path base = std::filesystem::path(args.out) / name;
    write_lab_file(base.string() + ".lab", to_segments(truth));
    write_posterior_csv(base.string() + ".csv", post);
    if (args.emit_frames) write_frames_csv(base.string() + ".frames.csv", truth);
  });
  std::cout << "simulated " << args.songs << " songs x " << args.frames
            << " frames -> " << args.out << "\n";
  return 0;
}

// --- sweep ------------------------------------------------------------

struct SweepArgs {
  std::string corpus;
  std::string out;
  std::string temperatures = "0.5,1,1.3,2";
  std::string smoothings = "none,uniform:0.9";
  std::string modes = "none,dur,2";
  std::string alpha_grid = "0.001,0.01,0.1,0.5,1.0";
  std::string dump_dir;
  std::string unknown_policy = "reject";
  int folds = 4;
  int test_fold = 0;
  double frame_rate = kDefaultFrameRate;
  double feature_noise = 0.8;
  int epochs = 300;
  double learning_rate = 2.0;
  int max_stages = 16;
  std::uint64_t seed = 1;
  int jobs = 1;
  bool keep_going = false;
  bool skip_bad = false;
};

int run_sweep_cmd(const SweepArgs& args) {
  auto songs = load_corpus_or_die(args.corpus, lab_options(args.unknown_policy),
                                  args.skip_bad);
  SweepConfig config;
  config.temperatures = parse_double_list(args.temperatures);
  config.smoothings.clear();
  for (const auto& text : parse_string_list(args.smoothings))
    config.smoothings.push_back(parse_smoothing(text));
  config.modes = parse_string_list(args.modes);
  config.alpha_grid = parse_double_list(args.alpha_grid);
  config.n_folds = args.folds;
  config.test_fold = args.test_fold;
  config.frame_rate = args.frame_rate;
  config.feature_noise = args.feature_noise;
  config.epochs = args.epochs;
  config.learning_rate = args.learning_rate;
  config.max_stages = args.max_stages;
  config.seed = args.seed;
  config.jobs = args.jobs;
  config.keep_going = args.keep_going;
  config.dump_dir = args.dump_dir;

  auto rows = run_sweep(songs, config, &std::cout);
  write_sweep_csv(args.out, rows);
  std::cout << rows.size() << " grid cells -> " << args.out << "\n";
  for (const auto& row : rows)
    if (!row.error.empty()) return 3;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chord-recognition temporal models: N-gram chord language "
               "models and negative-binomial durations in a flattened "
               "hierarchical HMM"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML-style config file; flags win");

  TrainLmArgs lm_args;
  auto* lm_cmd = app.add_subcommand(
      "train-lm", "fit an N-gram chord change model on .lab annotations");
  lm_cmd->add_option("--corpus", lm_args.corpus, "directory of .lab files")
      ->required()
      ->check(CLI::ExistingDirectory);
  lm_cmd->add_option("--out", lm_args.out, "model file to write")->required();
  lm_cmd->add_option("--order", lm_args.order, "n-gram order N")
      ->check(CLI::PositiveNumber);
  lm_cmd->add_option("--alpha", lm_args.alpha,
                     "fixed pseudo-count; omit to select on validation fold");
  lm_cmd->add_option("--alpha-grid", lm_args.alpha_grid,
                     "comma-separated candidate pseudo-counts");
  lm_cmd->add_option("--folds", lm_args.folds, "fold count for selection");
  lm_cmd->add_option("--valid-fold", lm_args.valid_fold, "validation fold id");
  lm_cmd->add_option("--seed", lm_args.seed, "fold shuffle seed");
  lm_cmd->add_option("--report", lm_args.report, "per-alpha perplexity CSV");
  lm_cmd->add_option("--unknown-policy", lm_args.unknown_policy,
                     "reject|nochord for unparseable labels");
  lm_cmd->add_flag("--skip-bad", lm_args.skip_bad,
                   "skip unparseable files instead of aborting");

  FitDurationArgs dur_args;
  auto* dur_cmd = app.add_subcommand(
      "fit-duration", "fit the negative-binomial duration model");
  dur_cmd->add_option("--corpus", dur_args.corpus, "directory of .lab files")
      ->required()
      ->check(CLI::ExistingDirectory);
  dur_cmd->add_option("--out", dur_args.out, "model file to write")->required();
  dur_cmd->add_option("--frame-rate", dur_args.frame_rate, "frames per second")
      ->check(CLI::PositiveNumber);
  dur_cmd->add_option("--max-stages", dur_args.max_stages, "largest K tried");
  dur_cmd->add_option("--histogram", dur_args.histogram,
                      "duration histogram CSV to write");
  dur_cmd->add_option("--unknown-policy", dur_args.unknown_policy,
                      "reject|nochord for unparseable labels");
  dur_cmd->add_flag("--skip-bad", dur_args.skip_bad,
                    "skip unparseable files instead of aborting");

  DecodeArgs dec_args;
  auto* dec_cmd = app.add_subcommand(
      "decode", "Viterbi-decode posterior CSV files into .lab estimates");
  dec_cmd->add_option("--posteriors", dec_args.posteriors,
                      "directory of posterior .csv files")
      ->required()
      ->check(CLI::ExistingDirectory);
  dec_cmd->add_option("--out", dec_args.out, "directory for .lab estimates")
      ->required();
  dec_cmd->add_option("--mode", dec_args.mode,
                      "none (acoustic argmax), dur (duration chain only), or "
                      "ngram (full model)");
  dec_cmd->add_option("--lm", dec_args.lm, "n-gram model file (mode ngram)");
  dec_cmd->add_option("--duration", dec_args.duration,
                      "duration model file (modes dur and ngram)");
  dec_cmd->add_option("--temperature", dec_args.temperature,
                      "softmax temperature applied to the posteriors")
      ->check(CLI::PositiveNumber);
  dec_cmd->add_option("--summary", dec_args.summary,
                      "JSON-lines per-song log-probability summary");
  dec_cmd->add_option("--prior-file", dec_args.prior_file,
                      "CSV row of 25 class priors; emissions are divided by it");
  dec_cmd->add_option("--jobs", dec_args.jobs, "worker threads")
      ->check(CLI::PositiveNumber);

  EvalArgs eval_args;
  auto* eval_cmd =
      app.add_subcommand("eval", "score estimate .lab trees with WCSR");
  eval_cmd->add_option("--reference", eval_args.reference,
                       "directory of reference .lab files")
      ->required()
      ->check(CLI::ExistingDirectory);
  eval_cmd->add_option("--estimate", eval_args.estimate,
                       "directory of estimate .lab files");
  eval_cmd->add_option("--column", eval_args.columns,
                       "name=dir estimate tree; repeat for an ablation table");
  eval_cmd->add_option("--out", eval_args.out, "results CSV")->required();
  eval_cmd->add_option("--unknown-policy", eval_args.unknown_policy,
                       "reject|nochord for unparseable labels");

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand(
      "simulate", "generate a synthetic corpus of .lab + posterior files");
  sim_cmd->add_option("--out", sim_args.out, "output directory")->required();
  sim_cmd->add_option("--songs", sim_args.songs, "number of songs");
  sim_cmd->add_option("--frames", sim_args.frames, "frames per song");
  sim_cmd->add_option("--frame-rate", sim_args.frame_rate, "frames per second");
  sim_cmd->add_option("--seed", sim_args.seed, "master seed");
  sim_cmd->add_option("--stages", sim_args.stages, "duration stages K");
  sim_cmd->add_option("--advance-prob", sim_args.advance_prob,
                      "duration advance probability p");
  sim_cmd->add_option("--concentration", sim_args.concentration,
                      "chord-change peakiness of the generator");
  sim_cmd->add_option("--confusion-temperature", sim_args.confusion_temperature,
                      "how strongly confusions follow chord similarity");
  sim_cmd->add_option("--noise", sim_args.noise,
                      "posterior noise scale; 0 gives one-hot rows");
  sim_cmd->add_flag("--emit-frames", sim_args.emit_frames,
                    "also write frame,chord_index CSVs");
  sim_cmd->add_option("--jobs", sim_args.jobs, "worker threads")
      ->check(CLI::PositiveNumber);

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "temperature x smoothing x language-model grid experiment");
  sweep_cmd->add_option("--corpus", sweep_args.corpus,
                        "directory of .lab files")
      ->required()
      ->check(CLI::ExistingDirectory);
  sweep_cmd->add_option("--out", sweep_args.out, "grid results CSV")->required();
  sweep_cmd->add_option("--temperatures", sweep_args.temperatures,
                        "comma-separated softmax temperatures");
  sweep_cmd->add_option("--smoothings", sweep_args.smoothings,
                        "comma list of none|uniform:b|unigram:b|smear:w");
  sweep_cmd->add_option("--modes", sweep_args.modes,
                        "comma list of none|dur|<order>");
  sweep_cmd->add_option("--alpha-grid", sweep_args.alpha_grid,
                        "candidate pseudo-counts for the language models");
  sweep_cmd->add_option("--folds", sweep_args.folds, "fold count");
  sweep_cmd->add_option("--test-fold", sweep_args.test_fold, "held-out fold");
  sweep_cmd->add_option("--frame-rate", sweep_args.frame_rate,
                        "frames per second");
  sweep_cmd->add_option("--feature-noise", sweep_args.feature_noise,
                        "chroma feature noise of the toy acoustic model");
  sweep_cmd->add_option("--epochs", sweep_args.epochs, "toy model epochs");
  sweep_cmd->add_option("--learning-rate", sweep_args.learning_rate,
                        "toy model learning rate");
  sweep_cmd->add_option("--max-stages", sweep_args.max_stages,
                        "largest duration K tried");
  sweep_cmd->add_option("--seed", sweep_args.seed, "master seed");
  sweep_cmd->add_option("--jobs", sweep_args.jobs, "worker threads")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--dump-dir", sweep_args.dump_dir,
                        "dump calibrated test-fold posteriors per cell");
  sweep_cmd->add_flag("--keep-going", sweep_args.keep_going,
                      "record failing cells instead of aborting");
  sweep_cmd->add_flag("--skip-bad", sweep_args.skip_bad,
                      "skip unparseable files instead of aborting");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(lm_cmd)) return run_train_lm(lm_args);
    if (app.got_subcommand(dur_cmd)) return run_fit_duration(dur_args);
    if (app.got_subcommand(dec_cmd)) return run_decode(dec_args);
    if (app.got_subcommand(eval_cmd)) return run_eval(eval_args);
    if (app.got_subcommand(sim_cmd)) return run_simulate(sim_args);
    if (app.got_subcommand(sweep_cmd)) return run_sweep_cmd(sweep_args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
