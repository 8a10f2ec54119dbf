#pragma once

#include <Eigen/Dense>

namespace crftiw {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace crftiw
