#pragma once

#include <string>
#include <vector>

#include "icw/function.hpp"
#include "icw/group_ring.hpp"
#include "icw/ideal.hpp"
#include "icw/positivity.hpp"

namespace icw {

/// sum alpha_s h(s) s.
GroupRingElement schur_multiply(const GroupFunction& h, const GroupRingElement& x);

/// Pointwise product phi * h of a normalized positive definite phi (phi(e) = 1) with h.
GroupFunction state_compose(const GroupFunction& phi, const GroupFunction& h);

struct FunctionCheck {
  std::string label;
  PsdVerdict pd;
  MembershipVerdict membership;
  double deviation = 0;  // max_{|s| <= R_conv} |h(s) - 1|
  double threshold = 0;
  std::vector<std::string> failures;

  bool pass() const { return failures.empty(); }
};

struct EqualityCertificate {
  IdealSpec ideal;
  int conv_radius = 0;
  bool accepted = false;
  std::string witness;  // e.g. "amenability witness"
  std::vector<FunctionCheck> checks;
  std::vector<std::string> failures;  // schedule-level and per-function failures
};

std::string witness_label(const IdealSpec& ideal);

/// Accepts iff every h_n is positive definite on ball(R_conv), is a member of
/// the ideal, and its deviation from 1 on ball(R_conv) stays below a strictly
/// decreasing threshold schedule while itself not increasing along the family.
EqualityCertificate equality_certificate(const IdealSpec& ideal, const std::vector<GroupFunction>& family,
                                         int conv_radius, const std::vector<double>& thresholds,
                                         double psd_tol = kDefaultPsdTolerance,
                                         std::size_t budget = kDefaultElementBudget);

/// Default schedule 0.95^i, used when no thresholds are supplied.
std::vector<double> default_thresholds(std::size_t count);

}  // namespace icw
