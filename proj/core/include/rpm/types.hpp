#pragma once

#include <Eigen/Dense>

namespace rpm {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;

/// Dense row-major matrix. Each row of a sensing matrix is one measurement vector a_i.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Ground truth, anchors and estimates all live in R^n.
using Signal = Vector;

/// m x n sensing ensemble, one row per measurement.
using SensingMatrix = Matrix;

}  // namespace rpm
