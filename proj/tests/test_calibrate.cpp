#include <doctest.h>

#include <cmath>

#include "chordtm/calibrate.hpp"
#include "chordtm/errors.hpp"
#include "chordtm/rng.hpp"

using namespace chordtm;

namespace {

Matrix random_rows(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    double total = 0.0;
    for (int c = 0; c < cols; ++c) {
      m(r, c) = std::exp(rng.normal());
      total += m(r, c);
    }
    m.row(r) /= total;
  }
  return m;
}

Matrix one_hot_rows(const std::vector<int>& classes, int cols) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(classes.size()), cols);
  for (std::size_t r = 0; r < classes.size(); ++r) m(r, classes[r]) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("temperature one is the identity") {
  Rng rng(1);
  Matrix rows = random_rows(rng, 20, 25);
  Matrix out = apply_temperature(rows, 1.0);
  CHECK((out - rows).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("uniform rows are a fixed point for every temperature") {
  Matrix uniform = Matrix::Constant(4, 25, 1.0 / 25);
  for (double t : {0.5, 2.0, 10.0}) {
    Matrix out = apply_temperature(uniform, t);
    CHECK((out.array() - 1.0 / 25).abs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("temperature two takes square roots") {
  Matrix row(1, 2);
  row << 0.8, 0.2;
  Matrix out = apply_temperature(row, 2.0);
  double norm = std::sqrt(0.8) + std::sqrt(0.2);
  CHECK(out(0, 0) == doctest::Approx(std::sqrt(0.8) / norm).epsilon(1e-9));
  CHECK(out(0, 1) == doctest::Approx(std::sqrt(0.2) / norm).epsilon(1e-9));
  CHECK(out(0, 0) == doctest::Approx(2.0 / 3).epsilon(1e-4));
}

TEST_CASE("temperature never moves the argmax") {
  Rng rng(2);
  Matrix rows = random_rows(rng, 50, 25);
  for (double t : {0.5, 1.0, 1.3, 2.0, 1e6}) {
    Matrix out = apply_temperature(rows, t);
    for (int r = 0; r < rows.rows(); ++r) {
      Eigen::Index before, after;
      rows.row(r).maxCoeff(&before);
      out.row(r).maxCoeff(&after);
      CHECK(before == after);
      CHECK(out.row(r).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("huge temperatures flatten to uniform") {
  Rng rng(3);
  Matrix rows = random_rows(rng, 10, 25);
  Matrix out = apply_temperature(rows, 1e6);
  CHECK((out.array() - 1.0 / 25).abs().maxCoeff() <= 1e-5);
}

TEST_CASE("zero entries are floored, not fatal") {
  Matrix row(1, 3);
  row << 1.0, 0.0, 0.0;
  Matrix out = apply_temperature(row, 2.0);
  CHECK(out.allFinite());
  CHECK(out.row(0).sum() == doctest::Approx(1.0));
  Eigen::Index arg;
  out.row(0).maxCoeff(&arg);
  CHECK(arg == 0);
}

TEST_CASE("temperature must be positive") {
  Matrix row = Matrix::Constant(1, 3, 1.0 / 3);
  CHECK_THROWS_AS(apply_temperature(row, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(apply_temperature(row, -1.0), std::invalid_argument);
}

TEST_CASE("uniform smoothing keeps beta at the truth") {
  Matrix targets = one_hot_rows({3, 0, 24}, 25);

  Matrix unchanged = smooth_targets(targets, SmoothingSpec::uniform(1.0));
  CHECK((unchanged - targets).cwiseAbs().maxCoeff() == 0.0);

  Matrix smooth = smooth_targets(targets, SmoothingSpec::uniform(0.9));
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 25; ++c) {
      double expected = targets(r, c) == 1.0 ? 0.9 : 0.1 / 24;
      CHECK(smooth(r, c) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("unigram smoothing gives the truth its marginal share too") {
  Matrix targets = one_hot_rows({1, 2}, 25);
  Vector marginal = Vector::Constant(25, 0.02);
  marginal[1] = 0.26;  // sums to 1: 24 * 0.02 + 0.26 = 0.74? fix below
  marginal[2] = 0.28;
  marginal /= marginal.sum();

  Matrix smooth =
      smooth_targets(targets, SmoothingSpec::unigram(0.8, marginal));
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 25; ++c) {
      double expected = 0.8 * targets(r, c) + 0.2 * marginal[c];
      CHECK(smooth(r, c) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("smearing averages over the centred window") {
  // Frames C, C, A with window 3: the middle frame sees two C and one A.
  Matrix targets = one_hot_rows({0, 0, 18}, 25);
  Matrix smeared = smooth_targets(targets, SmoothingSpec::smear(3));
  CHECK(smeared(1, 0) == doctest::Approx(2.0 / 3));
  CHECK(smeared(1, 18) == doctest::Approx(1.0 / 3));
  // Edges truncate: first row averages frames 0..1 only.
  CHECK(smeared(0, 0) == doctest::Approx(1.0));
  CHECK(smeared(2, 0) == doctest::Approx(0.5));
  CHECK(smeared(2, 18) == doctest::Approx(0.5));
}

TEST_CASE("smoothed rows stay distributions") {
  Rng rng(4);
  std::vector<int> classes;
  for (int i = 0; i < 40; ++i) classes.push_back(rng.uniform_int(25));
  Matrix targets = one_hot_rows(classes, 25);
  Vector marginal = random_rows(rng, 1, 25).row(0).transpose();

  for (const auto& spec :
       {SmoothingSpec::uniform(0.7), SmoothingSpec::unigram(0.95, marginal),
        SmoothingSpec::smear(5)}) {
    Matrix out = smooth_targets(targets, spec);
    CHECK(out.rows() == targets.rows());
    for (int r = 0; r < out.rows(); ++r) {
      CHECK(out.row(r).sum() == doctest::Approx(1.0).epsilon(1e-9));
      CHECK((out.row(r).array() >= 0.0).all());
    }
  }
}

TEST_CASE("smoothing rejects bad parameters") {
  Matrix targets = one_hot_rows({0}, 25);
  CHECK_THROWS_AS(smooth_targets(targets, SmoothingSpec::uniform(0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(smooth_targets(targets, SmoothingSpec::uniform(1.5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(smooth_targets(targets, SmoothingSpec::smear(4)),
                  std::invalid_argument);
  Matrix not_one_hot = Matrix::Constant(1, 25, 1.0 / 25);
  CHECK_THROWS_AS(smooth_targets(not_one_hot, SmoothingSpec::uniform(0.9)),
                  DataError);
}
