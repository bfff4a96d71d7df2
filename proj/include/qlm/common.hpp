#pragma once
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qlm {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using SpMat = Eigen::SparseMatrix<double>;
using CSpMat = Eigen::SparseMatrix<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// bad input / configuration (cli exit 2)
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// numerical failure (cli exit 3)
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qlm
