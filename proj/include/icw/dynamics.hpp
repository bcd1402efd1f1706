#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "icw/certificate.hpp"
#include "icw/function.hpp"
#include "icw/group.hpp"
#include "icw/positivity.hpp"
#include "icw/representation.hpp"
#include "icw/types.hpp"

namespace icw {

/// A group acting by permutations on {0..N-1} with a full-support probability measure.
/// Convention: (s.f)(x) = f(s^{-1}.x).
class FiniteSystem {
 public:
  /// Validates bijectivity, defining relations, positivity and normalization;
  /// errors name the offending location (e.g. "action.a[3]", "measure[2]").
  FiniteSystem(GroupModel model, std::vector<std::vector<int>> action, std::vector<double> measure);

  const GroupModel& model() const { return model_; }
  int points() const { return static_cast<int>(measure_.size()); }
  const std::vector<double>& measure() const { return measure_; }
  const std::vector<int>& permutation(int generator) const { return action_[static_cast<std::size_t>(generator)]; }

  /// s.x
  int act(const GroupElement& s, int x) const;
  int act_letter(Letter l, int x) const;

 private:
  GroupModel model_;
  std::vector<std::vector<int>> action_;
  std::vector<std::vector<int>> inverse_;
  std::vector<double> measure_;
};

/// Random permutation action (relations respected) and random positive measure.
FiniteSystem random_system(const GroupModel& model, int points, std::uint64_t seed);

/// rho_s(x) = mu(s^{-1}.x) / mu(x). The defining identity
/// int f dmu = int (s.f) rho_s dmu is verified on every delta_y.
VectorXr radon_nikodym(const FiniteSystem& system, const GroupElement& s);

/// max_y |int delta_y dmu - int (s.delta_y) rho_s dmu|.
double defining_identity_defect(const FiniteSystem& system, const GroupElement& s);
/// max_x |rho_{st}(x) - rho_s(x) rho_t(s^{-1}.x)|.
double chain_rule_defect(const FiniteSystem& system, const GroupElement& s, const GroupElement& t);

/// (U_s f)(x) = f(s^{-1}.x) rho_s(x)^{1/2} on L2(X, mu), with multiplication operators.
class CovariantRep {
 public:
  /// Verifies unitarity and covariance of every generator to 1e-12;
  /// a failure throws ConsistencyError.
  explicit CovariantRep(FiniteSystem system);

  const FiniteSystem& system() const { return system_; }
  const MatrixXr& generator(int g) const { return generators_[static_cast<std::size_t>(g)]; }

  MatrixXr evaluate(const GroupElement& s) const;
  static MatrixXr multiplication(const VectorXc& f);
  /// U_s^* with respect to the mu inner product: D^{-1} U^T D.
  MatrixXr adjoint(const MatrixXr& u) const;
  /// max |U^* D U - D| (unitarity on L2(mu)).
  double unitarity_defect(const MatrixXr& u) const;
  /// max |U M_f U^* - M_{s.f}|.
  double covariance_defect(const GroupElement& s, const VectorXc& f) const;
  /// Same representation in mu-orthonormal coordinates D^{1/2} U D^{-1/2}.
  FiniteUnitaryRep orthonormal() const;
  /// mu inner product <f, g> = sum f conj(g) mu.
  cplx inner(const VectorXc& f, const VectorXc& g) const;

 private:
  FiniteSystem system_;
  std::vector<MatrixXr> generators_;
  VectorXr mu_;
};

CovariantRep covariant_rep(const FiniteSystem& system);

struct Envelopes {
  std::string mode;  // "all" or "ball"
  int radius = -1;
  VectorXr upper;
  VectorXr lower;
  std::vector<GroupElement> argmax;
  std::vector<GroupElement> argmin;
  double integral_upper = 0;
  double integral_lower = 0;
  int last_change = 0;  // ball mode: largest radius that changed an envelope
  bool stabilized = true;
};

/// sup / inf of rho_s(x) over all s (orbit closure) or over ball(R).
Envelopes envelopes(const FiniteSystem& system, std::optional<int> radius = std::nullopt,
                    std::size_t budget = kDefaultElementBudget);

struct SpectralGap {
  double lambda_min = 0;
  VectorXc vector;  // unit, largest component real positive
  bool fixed = false;
};

/// lambda_min of sum_{s in S} (I - U_s)^*(I - U_s) over the symmetric generating set.
SpectralGap spectral_gap(const FiniteUnitaryRep& rep);
/// Same for the covariant representation; the vector is returned as a function on X.
SpectralGap spectral_gap(const CovariantRep& rep);

/// h: X x Gamma -> C with a tail certificate in s, uniform over x.
class GroupoidFunction {
 public:
  using Evaluator = std::function<cplx(int, const GroupElement&)>;

  GroupoidFunction(std::shared_ptr<const FiniteSystem> system, Evaluator eval, TailCertificate tail, std::string label);

  const FiniteSystem& system() const { return *system_; }
  std::shared_ptr<const FiniteSystem> system_ptr() const { return system_; }
  const TailCertificate& tail() const { return tail_; }
  const std::string& label() const { return label_; }

  cplx operator()(int x, const GroupElement& s) const;

 private:
  std::shared_ptr<const FiniteSystem> system_;
  std::shared_ptr<const Evaluator> eval_;
  TailCertificate tail_;
  std::string label_;
};

/// h~(x, s) = h(s).
GroupoidFunction lift(std::shared_ptr<const FiniteSystem> system, const GroupFunction& h);

struct GroupoidPdVerdict {
  std::vector<PsdVerdict> per_point;
  bool pass = true;
  int first_failure = -1;
};

/// For each x, M_x[i][j] = h(s_i.x, s_i s_j^{-1}) must be PSD.
GroupoidPdVerdict groupoid_pd_check(const GroupoidFunction& h, std::span<const GroupElement> elements,
                                    double tol = kDefaultPsdTolerance);

/// sum_s f_s s in the convolution algebra of X x| Gamma; f_s are functions on X.
struct GroupoidElement {
  GroupModel model;
  int points = 1;
  std::map<GroupElement, VectorXc> terms;
};

/// m_h(sum f_s s) = sum (f_s h(., s)) s.
GroupoidElement groupoid_schur_multiply(const GroupoidFunction& h, const GroupoidElement& a);

/// psi(s) = phi_v(m_h(1 s)) = <M_{h(., s)} U_s v, v>_mu for the vector state of v.
GroupFunction state_function(const GroupoidFunction& h, const VectorXc& v);
/// K[i][j] = psi(s_i^{-1} s_j): the Gram matrix of phi_v o m_h on the elements 1 s_i.
MatrixXc state_kernel(const GroupoidFunction& h, const VectorXc& v, std::span<const GroupElement> elements);

/// H(s) = max_x |h(x, s)|, with the certificate of h.
GroupFunction sup_norm_profile(const GroupoidFunction& h);

enum class ActionKind { Amenable, ATmenable };

struct ActionCheck {
  std::string label;
  GroupoidPdVerdict pd;
  MembershipVerdict membership;
  double deviation = 0;  // max_{x, |s| <= R_conv} |h(x, s) - 1|
  double threshold = 0;
  std::vector<std::string> failures;
};

struct ActionCertificate {
  ActionKind kind = ActionKind::Amenable;
  int conv_radius = 0;
  bool accepted = false;
  std::vector<ActionCheck> checks;
  std::vector<std::string> failures;
};

std::string to_string(ActionKind kind);

ActionCertificate action_certificate(ActionKind kind, const std::vector<GroupoidFunction>& family, int conv_radius,
                                     const std::vector<double>& thresholds, double psd_tol = kDefaultPsdTolerance,
                                     std::size_t budget = kDefaultElementBudget);

struct CandidateVector {
  std::string name;
  VectorXc vector;
  double residual = 0;  // max_s ||U_s v - v|| / ||v|| over generators
  bool fixed = false;
};

struct DnReport {
  Envelopes env;
  bool upper_integrable = true;
  bool lower_positive = true;
  std::string caveat;
  SpectralGap gap;
  std::vector<CandidateVector> candidates;
  bool fixed_vector_exists = false;
};

DnReport dn_report(const FiniteSystem& system);

}  // namespace icw
