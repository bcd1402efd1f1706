#pragma once

#include <limits>
#include <string>

#include "icw/function.hpp"

namespace icw {

enum class SeriesStatus { Finite, Divergent, Undecided };
std::string to_string(SeriesStatus status);

struct LpNorm {
  double partial = 0;  // sum_{|s| <= R} |h(s)|^p, exact
  double tail_bound = std::numeric_limits<double>::infinity();
  SeriesStatus status = SeriesStatus::Undecided;
  int radius = 0;
  double p = 1;
  std::string witness;

  double total() const { return partial + tail_bound; }
};

/// l^p mass of h: exact partial sum over ball(R) plus a certified tail bound.
/// Radial functions are summed sphere by sphere, so R is not limited by the
/// element budget for them.
///
/// An ExpDecay(A, c) tail is declared finite when |S| c^p < 1, where |S| is the
/// size of the generating set (every sphere satisfies s_k <= |S|^k). It is
/// declared divergent only when the certificate is tight and the exact sphere
/// growth rate gives (growth) c^p >= 1. Everything in between is undecided.
LpNorm lp_norm(const GroupFunction& h, double p, int radius, std::size_t budget = kDefaultElementBudget);

enum class Membership { Member, NonMember, Undecided };
std::string to_string(Membership m);

struct MembershipVerdict {
  Membership verdict = Membership::Undecided;
  std::string witness;

  bool member() const { return verdict == Membership::Member; }
};

/// Three-valued membership; never guesses beyond what the certificate proves.
MembershipVerdict ideal_membership(const GroupFunction& h, const IdealSpec& ideal,
                                   std::size_t budget = kDefaultElementBudget);

/// max_{|s| = k} |h(s)| for k = 0..R, by enumeration (radial functions use the profile).
std::vector<double> sphere_sups(const GroupFunction& h, int radius, std::size_t budget = kDefaultElementBudget);

}  // namespace icw
