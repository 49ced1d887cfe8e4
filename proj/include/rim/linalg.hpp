#pragma once

#include <Eigen/Dense>

namespace rim {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;

}  // namespace rim
