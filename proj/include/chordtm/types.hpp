#pragma once

#include <Eigen/Core>

#include <cmath>

namespace chordtm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// Log-domain zero. A large negative sentinel instead of -infinity, so that
// sums of impossible scores stay finite and never turn into NaN when
// subtracted from each other.
constexpr double kLogZero = -1e30;

inline double safe_log(double v) { return v > 0.0 ? std::log(v) : kLogZero; }

}  // namespace chordtm
