#include "chordtm/simulate.hpp"

#include <cmath>

#include "chordtm/calibrate.hpp"

namespace chordtm {

Matrix chroma_templates() {
  Matrix t = Matrix::Zero(ChordSymbol::kNumClasses, 12);
  for (int root = 0; root < 12; ++root) {
    for (int minor = 0; minor < 2; ++minor) {
      int row = root * 2 + minor;
      t(row, root) = 1.0;
      t(row, (root + (minor ? 3 : 4)) % 12) = 1.0;
      t(row, (root + 7) % 12) = 1.0;
    }
  }
  t.row(ChordSymbol::kNoChordIndex).setConstant(1.0);
  for (Eigen::Index r = 0; r < t.rows(); ++r) t.row(r).normalize();
  return t;
}

Matrix chord_similarity() {
  Matrix t = chroma_templates();
  return t * t.transpose();  // rows are unit vectors, so this is cosine
}

PosteriorMatrix simulate_posteriors(const FrameSequence& truth,
                                    double confusion_temperature,
                                    double noise_scale, std::uint64_t seed) {
  if (confusion_temperature <= 0.0 || noise_scale <= 0.0)
    throw std::invalid_argument("simulator parameters must be > 0");
  const Matrix sim = chord_similarity();
  const int classes = ChordSymbol::kNumClasses;
  Rng rng(derive_seed(seed, "simulate-posteriors"));

  PosteriorMatrix out;
  out.frame_rate = truth.frame_rate;
  out.values.resize(static_cast<Eigen::Index>(truth.labels.size()), classes);
  Eigen::RowVectorXd z(classes);
  for (std::size_t t = 0; t < truth.labels.size(); ++t) {
    int truth_class = truth.labels[t].index();
    for (int j = 0; j < classes; ++j)
      z[j] = (sim(truth_class, j) - 1.0) / confusion_temperature / noise_scale +
             rng.normal();
    out.values.row(static_cast<Eigen::Index>(t)) = softmax_rows(z);
  }
  return out;
}

Matrix chroma_features(const FrameSequence& truth, double feature_noise,
                       std::uint64_t seed) {
  const Matrix templates = chroma_templates();
  Rng rng(derive_seed(seed, "chroma-features"));
  Matrix out(static_cast<Eigen::Index>(truth.labels.size()), 12);
  for (std::size_t t = 0; t < truth.labels.size(); ++t) {
    out.row(static_cast<Eigen::Index>(t)) = templates.row(truth.labels[t].index());
    for (int j = 0; j < 12; ++j)
      out(static_cast<Eigen::Index>(t), j) += feature_noise * rng.normal();
  }
  return out;
}

BigramSampler BigramSampler::harmonic(double concentration, int vocab) {
  const Matrix sim = chord_similarity();
  BigramSampler s;
  s.change_probs = Matrix::Zero(vocab, vocab);
  for (int cur = 0; cur < vocab; ++cur) {
    double total = 0.0;
    for (int next = 0; next < vocab; ++next) {
      if (next == cur) continue;
      double w = std::exp(concentration * sim(cur, next));
      s.change_probs(cur, next) = w;
      total += w;
    }
    s.change_probs.row(cur) /= total;
  }
  s.initial = Vector::Constant(vocab, 1.0 / vocab);
  return s;
}

namespace {
int sample_index(const Vector& probs, Rng& rng) {
  double u = rng.uniform();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size() - 1);
}
}  // namespace

ChordSymbol BigramSampler::sample_first(Rng& rng) const {
  return ChordSymbol(sample_index(initial, rng));
}

ChordSymbol BigramSampler::sample_next(ChordSymbol current, Rng& rng) const {
  Vector row = change_probs.row(current.index()).transpose();
  return ChordSymbol(sample_index(row, rng));
}

int sample_duration(const DurationModel& model, Rng& rng) {
  int frames = 0;
  int stage = 1;
  while (true) {
    ++frames;
    if (rng.bernoulli(model.advance_prob)) {
      if (++stage > model.stages) return frames;
    }
  }
}

FrameSequence sample_song(const BigramSampler& sampler, const DurationModel& dm,
                          int frames, double frame_rate, Rng& rng) {
  FrameSequence out;
  out.frame_rate = frame_rate;
  out.labels.reserve(frames);
  ChordSymbol chord = sampler.sample_first(rng);
  while (static_cast<int>(out.labels.size()) < frames) {
    int d = sample_duration(dm, rng);
    // A segment that does not fit whole would leave a truncated run shorter
    // than the chain allows; extend the previous chord over the remainder
    // instead.
    if (static_cast<int>(out.labels.size()) + d > frames && !out.labels.empty()) {
      out.labels.resize(frames, out.labels.back());
      break;
    }
    for (int i = 0; i < d && static_cast<int>(out.labels.size()) < frames; ++i)
      out.labels.push_back(chord);
    chord = sampler.sample_next(chord, rng);
  }
  return out;
}

}  // namespace chordtm
