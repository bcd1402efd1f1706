#pragma once

#include <complex>

#include <Eigen/Dense>

namespace icw {

using real = double;
using cplx = std::complex<double>;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXc = Matrix<cplx>;
using VectorXc = Vector<cplx>;
using MatrixXr = Matrix<real>;
using VectorXr = Vector<real>;

}  // namespace icw
