#include "chordtm/toy_model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "chordtm/calibrate.hpp"
#include "chordtm/errors.hpp"

namespace chordtm {

namespace {

void check_finite(const Matrix& m, const char* what) {
  if (!m.allFinite())
    throw std::invalid_argument(std::string(what) + " contains non-finite values");
}

void check_row_stochastic(const Matrix& targets) {
  for (Eigen::Index r = 0; r < targets.rows(); ++r)
    if ((targets.row(r).array() < 0.0).any() ||
        std::abs(targets.row(r).sum() - 1.0) > 1e-6)
      throw std::invalid_argument("target row " + std::to_string(r) +
                                  " is not a distribution");
}

}  // namespace

Matrix LinearSoftmaxModel::predict(const Matrix& features) const {
  Matrix scores = (features * weights).rowwise() + bias;
  return softmax_rows(scores);
}

double cross_entropy(const LinearSoftmaxModel& model, const Matrix& features,
                     const Matrix& targets) {
  Matrix probs = model.predict(features);
  double loss = -(targets.array() * probs.array().max(1e-300).log()).sum();
  return loss / static_cast<double>(features.rows());
}

double loss_and_gradient(const LinearSoftmaxModel& model, const Matrix& features,
                         const Matrix& targets, Matrix& grad_weights,
                         RowVector& grad_bias) {
  const double n = static_cast<double>(features.rows());
  Matrix probs = model.predict(features);
  Matrix diff = (probs - targets) / n;  // d loss / d scores
  grad_weights = features.transpose() * diff;
  grad_bias = diff.colwise().sum();
  return -(targets.array() * probs.array().max(1e-300).log()).sum() / n;
}

LinearSoftmaxModel train_toy_model(const Matrix& features, const Matrix& targets,
                                   int epochs, double learning_rate,
                                   ToyTrainReport* report) {
  if (features.rows() != targets.rows())
    throw std::invalid_argument("features and targets disagree on frame count");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (learning_rate <= 0.0)
    throw std::invalid_argument("learning rate must be > 0");
  check_finite(features, "features");
  check_finite(targets, "targets");
  check_row_stochastic(targets);

  LinearSoftmaxModel model;
  model.weights = Matrix::Zero(features.cols(), targets.cols());
  model.bias = RowVector::Zero(targets.cols());

  Matrix grad_w;
  RowVector grad_b;
  double prev_loss = std::numeric_limits<double>::infinity();
  int rising = 0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    double loss = loss_and_gradient(model, features, targets, grad_w, grad_b);
    model.weights -= learning_rate * grad_w;
    model.bias -= learning_rate * grad_b;
    if (report) report->losses.push_back(loss);
    if (loss > prev_loss) {
      if (++rising >= 5)
        throw NumericError(
            "training diverged: loss increased 5 consecutive epochs (epoch " +
            std::to_string(epoch) + ", loss " + std::to_string(loss) +
            "); lower the learning rate");
    } else {
      rising = 0;
    }
    prev_loss = loss;
  }
  return model;
}

void save_toy_model(const std::filesystem::path& path,
                    const LinearSoftmaxModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path.string());
  char buf[64];
  auto write_row = [&](const auto& row) {
    for (Eigen::Index c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof(buf), "%s%.17g", c ? "," : "", row[c]);
      out << buf;
    }
    out << '\n';
  };
  for (Eigen::Index f = 0; f < model.weights.rows(); ++f)
    write_row(model.weights.row(f));
  write_row(model.bias);
}

LinearSoftmaxModel load_toy_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size())
      throw DataError(path.string() + ": ragged weight matrix");
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2)
    throw DataError(path.string() + ": expected weights plus a bias row");
  LinearSoftmaxModel model;
  model.weights.resize(static_cast<Eigen::Index>(rows.size() - 1),
                       static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t f = 0; f + 1 < rows.size(); ++f)
    for (std::size_t c = 0; c < rows[f].size(); ++c)
      model.weights(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(c)) =
          rows[f][c];
  model.bias.resize(static_cast<Eigen::Index>(rows.back().size()));
  for (std::size_t c = 0; c < rows.back().size(); ++c)
    model.bias(static_cast<Eigen::Index>(c)) = rows.back()[c];
  return model;
}

}  // namespace chordtm
