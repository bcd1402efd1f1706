#pragma once

#include <span>

#include "icw/function.hpp"
#include "icw/group.hpp"
#include "icw/positivity.hpp"
#include "icw/types.hpp"

namespace icw {

/// K[i][j] = h(t_i^{-1} s_j); the Gram matrix of the GNS vectors delta_s.
MatrixXc gns_kernel(const GroupFunction& h, std::span<const GroupElement> rows, std::span<const GroupElement> cols);

/// Truncated GNS construction of a positive definite h.
///
/// Coefficient space: vectors indexed by ball(R), read as sum xi_s delta_s in
/// the GNS space, with <xi, eta> = eta^* G xi and G[t][s] = h(t^{-1} s).
/// pi_g delta_s = delta_{gs}, so <pi_g delta_s, delta_t> = h(t^{-1} g s).
class GnsWindow {
 public:
  GnsWindow(GroupFunction h, int radius, int pad, double tol = kDefaultPsdTolerance,
            std::size_t budget = kDefaultElementBudget);

  const GroupFunction& function() const { return h_; }
  const Ball& ball() const { return ball_; }
  const Ball& padded() const { return padded_; }
  int pad() const { return pad_; }
  double tolerance() const { return tol_; }
  const MatrixXc& gram() const { return gram_; }
  const PsdVerdict& padded_verdict() const { return verdict_; }
  /// Numerical rank of G (eigenvalues above 1e-10 * lambda_max).
  Eigen::Index rank() const { return rank_; }

  /// C_g[t][s] = h(t^{-1} g s) for t, s in ball(R). Read from the padded Gram
  /// when |g| <= pad, evaluated directly otherwise.
  MatrixXc coefficient_matrix(const GroupElement& g) const;
  /// A_g = G^+ C_g: pi_g compressed to the window, acting on coefficients.
  MatrixXc compressed(const GroupElement& g) const;
  /// Moore-Penrose inverse of G with the rank cutoff.
  const MatrixXc& pseudo_inverse() const { return pinv_; }

  cplx inner(const VectorXc& xi, const VectorXc& eta) const { return eta.dot(gram_ * xi); }
  /// <pi_g xi, eta>.
  cplx coefficient(const GroupElement& g, const VectorXc& xi, const VectorXc& eta) const;
  VectorXc delta(const GroupElement& s) const;

 private:
  GroupFunction h_;
  Ball ball_;
  Ball padded_;
  int pad_;
  double tol_;
  MatrixXc padded_gram_;
  MatrixXc gram_;
  MatrixXc pinv_;
  PsdVerdict verdict_;
  Eigen::Index rank_ = 0;
};

/// Throws NotPositiveDefinite when h fails the PD check on ball(R + r).
GnsWindow gns_window(const GroupFunction& h, int radius, int pad, double tol = kDefaultPsdTolerance,
                     std::size_t budget = kDefaultElementBudget);

}  // namespace icw
