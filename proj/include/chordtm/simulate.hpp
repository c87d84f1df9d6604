#pragma once

#include <cstdint>
#include <vector>

#include "chordtm/chord.hpp"
#include "chordtm/duration.hpp"
#include "chordtm/frames.hpp"
#include "chordtm/posterior.hpp"
#include "chordtm/rng.hpp"
#include "chordtm/types.hpp"

namespace chordtm {

// Binary chroma template per chord class (root, third, fifth), L2-normalized;
// the no-chord row is flat. Rows are classes, columns the 12 pitch classes.
Matrix chroma_templates();

// Cosine similarity between class templates; the confusion structure of the
// synthetic acoustic model (parallel/relative/neighbour chords score high).
Matrix chord_similarity();

// Synthetic frame posteriors around a known label sequence. Per frame the
// row is softmax(z / noise_scale + g) with z_j = (sim(truth, j) - 1) /
// confusion_temperature and g standard normal, so noise_scale -> 0 recovers
// one-hot rows while confusion_temperature shapes how leaked mass follows
// chord similarity. Deterministic given the seed.
PosteriorMatrix simulate_posteriors(const FrameSequence& truth,
                                    double confusion_temperature,
                                    double noise_scale, std::uint64_t seed);

// Chroma-template features plus Gaussian noise, the toy classifier's input.
Matrix chroma_features(const FrameSequence& truth, double feature_noise,
                       std::uint64_t seed);

// First-order generative chord process for synthetic corpora: change
// probabilities follow softmax(concentration * similarity) over legal
// successors, so progressions have learnable structure.
struct BigramSampler {
  Matrix change_probs;  // row: current chord, col: next chord, zero diagonal
  Vector initial;       // distribution of the first chord

  static BigramSampler harmonic(double concentration,
                                int vocab = ChordSymbol::kNumClasses);

  ChordSymbol sample_first(Rng& rng) const;
  ChordSymbol sample_next(ChordSymbol current, Rng& rng) const;
};

// Dwell time through the duration chain: stay with 1-p, advance with p, exit
// after the last stage. Distributed as the duration model's PMF.
int sample_duration(const DurationModel& model, Rng& rng);

// Chord frames for one synthetic song: chords from the sampler, durations
// from the chain, exactly `frames` frames. A final segment that would not
// fit whole is replaced by extending the previous chord, so every run is at
// least `stages` frames long.
FrameSequence sample_song(const BigramSampler& sampler, const DurationModel& dm,
                          int frames, double frame_rate, Rng& rng);

}  // namespace chordtm
