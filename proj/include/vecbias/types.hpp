#pragma once

#include <Eigen/Dense>

namespace vecbias {

using Vector = Eigen::VectorXd;

// Row-major so that one word vector occupies a contiguous row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using RowRef = Eigen::Map<const Eigen::VectorXd>;

}  // namespace vecbias
