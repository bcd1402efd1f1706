#pragma once

#include <map>
#include <string_view>
#include <vector>

#include "icw/function.hpp"

namespace icw {

// Named function families.

/// h_n(s) = exp(-|s|/n); certificate ExpDecay(1, e^{-1/n}, tight).
GroupFunction haagerup(const GroupModel& model, double n);

/// psi(s) = |s| (unbounded; no tail certificate).
GroupFunction word_length_function(const GroupModel& model);

/// exp(-t * psi). The tail certificate cannot be derived from an arbitrary psi,
/// so callers that know one pass it in.
GroupFunction schoenberg(const GroupFunction& psi, double t, TailCertificate tail = NoCertificate{});

/// exp(-t |s|) with its exact decay certificate.
GroupFunction schoenberg_word_length(const GroupModel& model, double t);

/// h_F(s) = |F cap sF| / |F| for a nonempty finite F.
GroupFunction folner(const GroupModel& model, std::vector<GroupElement> set);
/// Folner function of the box {0..side-1}^n in Z^n.
GroupFunction folner_box(const GroupModel& model, int side);
/// Folner function of the ball of the given radius.
GroupFunction folner_ball(const GroupModel& model, int radius);

GroupFunction delta_e(const GroupModel& model);
GroupFunction constant(const GroupModel& model, cplx value);

/// Finite table of values, zero elsewhere.
GroupFunction table_function(const GroupModel& model, const std::map<GroupElement, cplx>& values, TailCertificate tail,
                             std::string label);

// Algebraic transforms with certificate propagation.

GroupFunction product(const GroupFunction& h, const GroupFunction& g);
GroupFunction power(const GroupFunction& h, int k);
/// (h + conj h) / 2; positive definite whenever h is.
GroupFunction real_part(const GroupFunction& h);
/// (g.h)(s) = h(g^{-1} s).
GroupFunction translate_left(const GroupElement& g, const GroupFunction& h);
/// (h.g)(s) = h(s g).
GroupFunction translate_right(const GroupFunction& h, const GroupElement& g);
/// f^* * f with f^*(s) = conj(f(s^{-1})); f must carry a FiniteSupport certificate.
GroupFunction adjoint_convolve(const GroupFunction& f, std::size_t budget = kDefaultElementBudget);

/// Parses "haagerup:n=2", "schoenberg:wordlength,t=0.5", "folner:box=3",
/// "folner:ball=2", "delta", "one", "wordlength", "neg-wordlength".
GroupFunction make_family(const GroupModel& model, std::string_view spec);

}  // namespace icw
