#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "icw/group.hpp"
#include "icw/types.hpp"

namespace icw {

// Tail certificates make ideal membership decidable beyond finite windows.

struct NoCertificate {};

/// h(s) = 0 whenever |s| > radius.
struct FiniteSupport {
  int radius = 0;
};

/// |h(s)| <= amplitude * rate^{|s|}, with equality when tight. A positive
/// floor adds the lower bound |h(s)| >= floor * rate^{|s|}.
struct ExpDecay {
  double amplitude = 1.0;
  double rate = 0.5;
  bool tight = false;
  double floor = 0.0;

  /// Constant of the certified lower bound (0 when there is none).
  double lower_amplitude() const { return tight ? amplitude : floor; }
};

/// sup_{|s| = k} |h(s)| <= bounds[k] for k < bounds.size(); when vanishing is
/// set the sphere sups are certified to tend to zero.
struct SphereSupSequence {
  std::vector<double> bounds;
  bool vanishing = false;
};

/// |h(s)| >= floor whenever |s| > radius.
struct BoundedBelow {
  double floor = 1.0;
  int radius = 0;
};

using TailCertificate = std::variant<NoCertificate, FiniteSupport, ExpDecay, SphereSupSequence, BoundedBelow>;

std::string describe(const TailCertificate& cert);

/// Why value (at an element of word length k) contradicts tail or sup_bound; nullptr when it does not.
const char* certificate_conflict(const TailCertificate& tail, const std::optional<double>& sup_bound, int k,
                                 cplx value);
[[noreturn]] void throw_certificate_violation(const TailCertificate& tail, const std::string& label,
                                              const std::string& where, const char* why);

/// Throws CertificateViolation when value (at an element of word length k) contradicts tail or sup_bound.
void check_certificate(const TailCertificate& tail, const std::optional<double>& sup_bound, int k, cplx value,
                       const std::string& label, const std::string& where);

/// A complex-valued function on a group model with an optional tail certificate.
///
/// Evaluation through operator() checks the certificate lazily and throws
/// CertificateViolation on disagreement. Radial functions (depending only on
/// the word length) additionally expose their profile, which lets sums over
/// spheres be computed without enumerating balls.
class GroupFunction {
 public:
  using Evaluator = std::function<cplx(const GroupElement&)>;
  using Profile = std::function<cplx(int)>;

  GroupFunction(GroupModel model, Evaluator eval, TailCertificate tail, std::string label);

  static GroupFunction radial(GroupModel model, Profile profile, TailCertificate tail, std::string label);

  const GroupModel& model() const { return model_; }
  const TailCertificate& tail() const { return tail_; }
  const std::string& label() const { return label_; }
  const std::optional<double>& sup_bound() const { return sup_bound_; }
  bool is_radial() const { return static_cast<bool>(profile_); }

  /// Value on the sphere of radius k; requires is_radial().
  cplx profile(int k) const;

  cplx operator()(const GroupElement& s) const;
  /// Evaluation without the certificate check.
  cplx raw(const GroupElement& s) const { return (*eval_)(s); }

  GroupFunction with_tail(TailCertificate tail) const;
  GroupFunction with_sup_bound(std::optional<double> bound) const;
  GroupFunction with_label(std::string label) const;

 private:
  void check(const GroupElement& s, cplx value) const;

  GroupModel model_;
  std::shared_ptr<const Evaluator> eval_;
  Profile profile_;
  TailCertificate tail_;
  std::optional<double> sup_bound_;
  std::string label_;
};

/// One of the ideals of l^infinity(Gamma) handled by membership queries.
struct IdealSpec {
  enum class Kind { CC, C0, Lp, Linf, L2Plus, TIdeal };
  Kind kind = Kind::C0;
  double p = 2.0;  // only for Lp

  static IdealSpec cc() { return {Kind::CC}; }
  static IdealSpec c0() { return {Kind::C0}; }
  static IdealSpec lp(double exponent) { return {Kind::Lp, exponent}; }
  static IdealSpec linf() { return {Kind::Linf}; }
  static IdealSpec l2plus() { return {Kind::L2Plus}; }
  static IdealSpec t_ideal() { return {Kind::TIdeal}; }

  /// "cc", "c0", "lp:3", "l2", "linf", "l2plus", "t".
  static IdealSpec parse(std::string_view text);
  std::string name() const;
};

}  // namespace icw
