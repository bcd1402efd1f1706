#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "icw/function.hpp"
#include "icw/gns.hpp"
#include "icw/group_ring.hpp"
#include "icw/ideal.hpp"

namespace icw {

struct NormEstimate {
  enum class Kind { LowerBound, UpperBound, Exact };
  double value = 0;
  Kind kind = Kind::LowerBound;
  std::string method;
  int radius = -1;  // -1 when no window is involved
  bool converged = true;
  int iterations = 0;
};

std::string to_string(NormEstimate::Kind kind);

template <class Scalar>
using SparseRowMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

/// Left convolution L_x: l2(ball(R)) -> l2(ball(R + r)), entry (t, s) = alpha_{t s^{-1}}.
class ConvolutionOperator {
 public:
  ConvolutionOperator(const GroupRingElement& x, int radius, std::size_t budget = kDefaultElementBudget);

  const Ball& domain() const { return *domain_; }
  const Ball& codomain() const { return *codomain_; }
  const SparseRowMatrix<cplx>& matrix() const { return matrix_; }

 private:
  std::shared_ptr<const Ball> domain_;
  std::shared_ptr<const Ball> codomain_;
  SparseRowMatrix<cplx> matrix_;
};

/// Compression of lambda(x) to l2(ball): entries (t, s) = alpha_{t s^{-1}} with t, s in the ball.
template <class Scalar>
SparseRowMatrix<Scalar> compressed_convolution(const GroupRingElement& x, const Ball& ball);

struct PowerIterationResult {
  double eigenvalue = 0;
  int iterations = 0;
  bool converged = false;
};

/// Top eigenvalue of a Hermitian PSD operator by power iteration; the Rayleigh
/// quotient of the last iterate is returned, so it never exceeds the true value.
template <class Scalar>
PowerIterationResult power_iteration(const SparseRowMatrix<Scalar>& a, Vector<Scalar> start, double rel_tol,
                                     int max_iterations);

struct PowerIterationConfig {
  double rel_tol = 1e-8;
  int max_iterations = 10000;
  std::uint64_t seed = 0;
};

/// ||L_x restricted to l2(ball(R))||, computed as the top eigenvalue of the
/// compression of lambda(x^* x) to ball(R). A lower bound for ||lambda(x)||,
/// nondecreasing in R.
NormEstimate reduced_norm_lower(const GroupRingElement& x, int radius, std::size_t budget = kDefaultElementBudget,
                                const PowerIterationConfig& config = {});

/// sum_k (k+1) ||x restricted to sphere k||_2; free groups only.
NormEstimate haagerup_upper_bound(const GroupRingElement& x);

/// Weighted Schur test with weights q^{|t|}, optimised over q in (0, 1].
/// Free groups only; q = 1 is the l1 bound.
NormEstimate schur_upper_bound(const GroupRingElement& x);

/// Best available upper bound for ||lambda(x)||: the minimum of the l1 norm and,
/// on free groups, the Haagerup and Schur-test bounds.
NormEstimate reduced_norm_upper(const GroupRingElement& x);

/// |sum alpha_s|; exact for the full norm when every coefficient is real and >= 0.
NormEstimate trivial_norm(const GroupRingElement& x);

/// Norms of pi_h(x) compressed to ball(R) for many x sharing one h.
/// Elements must have support radius at most pad. The Gram matrix on
/// ball(R + pad) is checked PSD once; real kernels use real arithmetic.
class GnsNormContext {
 public:
  GnsNormContext(const GroupFunction& h, int radius, int pad, double tol = kDefaultPsdTolerance,
                 std::size_t budget = kDefaultElementBudget);

  NormEstimate estimate(const GroupRingElement& x) const;
  /// Dimension of the GNS space seen by the window.
  Eigen::Index rank() const;
  bool real_kernel() const;

  struct Impl;

 private:
  GroupFunction h_;
  int radius_;
  int pad_;
  std::shared_ptr<const Ball> inner_;
  std::shared_ptr<const Ball> outer_;
  std::shared_ptr<const Impl> impl_;
};

/// sqrt of the top generalized eigenvalue of (L_x^* G_{R+r} L_x, G_R).
/// Throws NotPositiveDefinite when h fails on ball(R + r).
NormEstimate gns_norm_lower(const GroupFunction& h, const GroupRingElement& x, int radius,
                            double tol = kDefaultPsdTolerance, std::size_t budget = kDefaultElementBudget);

struct GapConfig {
  double gap_tol = 0.05;       // truncation side
  double exact_tol = 1e-6;     // exact-arithmetic side
  int reduced_radius = 8;
  int gns_radius = 3;
  double psd_tol = kDefaultPsdTolerance;
  std::size_t budget = kDefaultElementBudget;
  PowerIterationConfig power;
};

struct GnsFamilyEntry {
  std::string label;
  MembershipVerdict membership;
  std::optional<NormEstimate> estimate;
  std::string skipped;  // reason when no estimate was produced
};

struct NormGapReport {
  std::string element;
  std::string model;
  IdealSpec ideal;
  GapConfig config;
  NormEstimate trivial;
  NormEstimate reduced_lower;
  NormEstimate reduced_upper;
  std::vector<GnsFamilyEntry> family;
  std::optional<NormEstimate> best_gns;
  std::string verdict;  // "gap", "no_gap" or "undecided"
  bool gap = false;
  bool d_exceeds_reduced = false;
};

/// Haagerup functions n in {1, 2, 4, 8} and Folner balls of radius 1..3 (boxes on Z^n).
std::vector<GroupFunction> default_gns_family(const GroupModel& model);

NormGapReport norm_gap_report(const GroupRingElement& x, const IdealSpec& ideal, const GapConfig& config = {},
                              std::vector<GroupFunction> family = {});

}  // namespace icw
