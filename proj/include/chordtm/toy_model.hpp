#pragma once

#include <filesystem>
#include <vector>

#include "chordtm/types.hpp"

namespace chordtm {

// Linear softmax classifier, the desk-scale stand-in for a real acoustic
// network: small enough to verify against finite differences, expressive
// enough to show the effect of target smoothing and temperature.
struct LinearSoftmaxModel {
  Matrix weights;  // features x classes
  RowVector bias;  // classes

  // Row-stochastic class probabilities for each feature row.
  Matrix predict(const Matrix& features) const;
};

// Mean cross-entropy of the targets under the model's predictions.
double cross_entropy(const LinearSoftmaxModel& model, const Matrix& features,
                     const Matrix& targets);

// Loss plus analytic gradients; exposed so the gradient can be checked
// against central finite differences.
double loss_and_gradient(const LinearSoftmaxModel& model, const Matrix& features,
                         const Matrix& targets, Matrix& grad_weights,
                         RowVector& grad_bias);

struct ToyTrainReport {
  std::vector<double> losses;  // per epoch, after the step
};

// Full-batch gradient descent from zero weights. Targets may be any
// row-stochastic matrix (smoothed labels included). Throws NumericError if
// the loss increases five epochs in a row.
LinearSoftmaxModel train_toy_model(const Matrix& features, const Matrix& targets,
                                   int epochs, double learning_rate,
                                   ToyTrainReport* report = nullptr);

// CSV weight matrix, one row per feature plus a final bias row.
void save_toy_model(const std::filesystem::path& path,
                    const LinearSoftmaxModel& model);
LinearSoftmaxModel load_toy_model(const std::filesystem::path& path);

}  // namespace chordtm
