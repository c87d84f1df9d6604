#pragma once

#include <stdexcept>

#include <Eigen/Core>

#include "chordtm/types.hpp"

namespace chordtm {

// Row-wise stable softmax of a matrix of scores.
template <typename Derived>
Matrix softmax_rows(const Eigen::MatrixBase<Derived>& scores) {
  Matrix out = scores.template cast<double>();
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    Eigen::ArrayXd row = out.row(r).array() - out.row(r).maxCoeff();
    row = row.exp();
    out.row(r) = row / row.sum();
  }
  return out;
}

// Temperature softmax applied to stored posteriors: each row p becomes
// p^(1/T), renormalized — identical to dividing the producing network's
// logits by T, so files can be recalibrated without retraining anything.
// Entries are floored at 1e-12 before the power so that hard zeros survive
// the log. T = 1 is the identity; the argmax never changes.
template <typename Derived>
Matrix apply_temperature(const Eigen::MatrixBase<Derived>& posteriors,
                         double temperature) {
  if (temperature <= 0.0)
    throw std::invalid_argument("softmax temperature must be > 0");
  Matrix logits =
      posteriors.template cast<double>().array().max(1e-12).log() / temperature;
  return softmax_rows(logits);
}

// Target smoothing for acoustic-model training.
struct SmoothingSpec {
  enum class Kind { kUniform, kUnigram, kSmear };

  Kind kind = Kind::kUniform;
  double beta = 0.9;  // probability mass kept at the true label
  int window = 3;     // running-mean width in frames, odd
  Vector marginal;    // training-set class distribution (unigram only)

  static SmoothingSpec uniform(double beta) {
    SmoothingSpec s;
    s.kind = Kind::kUniform;
    s.beta = beta;
    return s;
  }
  static SmoothingSpec unigram(double beta, Vector marginal) {
    SmoothingSpec s;
    s.kind = Kind::kUnigram;
    s.beta = beta;
    s.marginal = std::move(marginal);
    return s;
  }
  static SmoothingSpec smear(int window) {
    SmoothingSpec s;
    s.kind = Kind::kSmear;
    s.window = window;
    return s;
  }
};

// One-hot targets -> smoothed row-stochastic targets.
//   uniform: true class keeps beta, the rest share 1-beta equally;
//   unigram: beta * onehot + (1-beta) * marginal, so the true class also
//            receives its marginal share;
//   smear:   per-class running mean over a centred window, truncated at the
//            edges and renormalized.
Matrix smooth_targets(const Matrix& onehot, const SmoothingSpec& spec);

}  // namespace chordtm
