#include "chordtm/calibrate.hpp"

#include <cmath>

#include "chordtm/errors.hpp"

namespace chordtm {

namespace {

void check_one_hot(const Matrix& targets) {
  for (Eigen::Index r = 0; r < targets.rows(); ++r) {
    Eigen::Index arg = 0;
    double max = targets.row(r).maxCoeff(&arg);
    if (std::abs(max - 1.0) > 1e-12 ||
        std::abs(targets.row(r).sum() - 1.0) > 1e-12)
      throw DataError("target row " + std::to_string(r) + " is not one-hot");
  }
}

}  // namespace

Matrix smooth_targets(const Matrix& onehot, const SmoothingSpec& spec) {
  check_one_hot(onehot);
  const Eigen::Index classes = onehot.cols();

  switch (spec.kind) {
    case SmoothingSpec::Kind::kUniform: {
      if (spec.beta <= 0.0 || spec.beta > 1.0)
        throw std::invalid_argument("beta must be in (0, 1]");
      double off = (1.0 - spec.beta) / static_cast<double>(classes - 1);
      return (onehot.array() * (spec.beta - off) + off).matrix();
    }
    case SmoothingSpec::Kind::kUnigram: {
      if (spec.beta <= 0.0 || spec.beta > 1.0)
        throw std::invalid_argument("beta must be in (0, 1]");
      if (spec.marginal.size() != classes)
        throw std::invalid_argument("marginal size must match class count");
      if (std::abs(spec.marginal.sum() - 1.0) > 1e-6 ||
          (spec.marginal.array() < 0.0).any())
        throw std::invalid_argument("marginal must be a distribution");
      Matrix out = spec.beta * onehot;
      out.rowwise() += (1.0 - spec.beta) * spec.marginal.transpose();
      return out;
    }
    case SmoothingSpec::Kind::kSmear: {
      if (spec.window < 1 || spec.window % 2 == 0)
        throw std::invalid_argument("smear window must be odd and >= 1");
      const Eigen::Index rows = onehot.rows();
      const int half = spec.window / 2;
      Matrix out(rows, classes);
      for (Eigen::Index t = 0; t < rows; ++t) {
        Eigen::Index lo = std::max<Eigen::Index>(0, t - half);
        Eigen::Index hi = std::min<Eigen::Index>(rows - 1, t + half);
        out.row(t) =
            onehot.middleRows(lo, hi - lo + 1).colwise().mean();
        out.row(t) /= out.row(t).sum();
      }
      return out;
    }
  }
  throw std::invalid_argument("unknown smoothing kind");
}

}  // namespace chordtm
