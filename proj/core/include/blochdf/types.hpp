#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Core>

namespace blochdf {

using Index = Eigen::Index;
using Complex = std::complex<double>;

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using IMatrix = Eigen::MatrixXi;

}  // namespace blochdf
