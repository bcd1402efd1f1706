#pragma once

#include <span>
#include <string>

#include <Eigen/Eigenvalues>

#include "icw/function.hpp"
#include "icw/types.hpp"

namespace icw {

inline constexpr double kDefaultPsdTolerance = 1e-8;

struct PsdVerdict {
  enum class Status { Pass, Indefinite, NonHermitian };
  Status status = Status::Pass;
  double min_eigenvalue = 0;
  double hermitian_defect = 0;  // max |M_ij - conj(M_ji)|
  double scale = 0;             // 1 + ||M||_inf
  std::size_t size = 0;

  bool pass() const { return status == Status::Pass; }
};

std::string to_string(PsdVerdict::Status status);

/// Relative PSD test: Hermitian within tol * (1 + ||M||_inf), then
/// lambda_min of the symmetrized matrix >= -tol * (1 + ||M||_inf).
template <class Derived>
PsdVerdict psd_verdict(const Eigen::MatrixBase<Derived>& m, double tol = kDefaultPsdTolerance) {
  using Scalar = typename Derived::Scalar;
  PsdVerdict v;
  v.size = static_cast<std::size_t>(m.rows());
  if (m.rows() == 0) return v;
  v.scale = 1.0 + m.cwiseAbs().rowwise().sum().maxCoeff();
  v.hermitian_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  Matrix<Scalar> sym = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(sym, Eigen::EigenvaluesOnly);
  v.min_eigenvalue = es.eigenvalues().minCoeff();
  if (v.hermitian_defect > tol * v.scale)
    v.status = PsdVerdict::Status::NonHermitian;
  else if (v.min_eigenvalue < -tol * v.scale)
    v.status = PsdVerdict::Status::Indefinite;
  return v;
}

/// M[i][j] = h(s_i s_j^{-1}).
MatrixXc pd_matrix(const GroupFunction& h, std::span<const GroupElement> elements);

/// Positive-definiteness of h on a finite window of distinct elements.
PsdVerdict pd_window_check(const GroupFunction& h, std::span<const GroupElement> elements,
                           double tol = kDefaultPsdTolerance);

struct CndVerdict {
  enum class Status { Pass, Fail, PreconditionFailed };
  Status status = Status::Pass;
  double max_violation = 0;  // largest eigenvalue of P N P (should be <= 0)
  double scale = 0;
  std::string precondition;  // which precondition failed, if any

  bool pass() const { return status == Status::Pass; }
};

std::string to_string(CndVerdict::Status status);

/// Conditionally negative type on a window: with N[i][j] = psi(s_i s_j^{-1})
/// and P the centering projector, -P N P must be PSD.
CndVerdict cnd_window_check(const GroupFunction& psi, std::span<const GroupElement> elements,
                            double tol = kDefaultPsdTolerance);

}  // namespace icw
