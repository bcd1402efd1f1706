#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "icw/group_ring.hpp"

namespace icw {

/// Element of the algebraic tensor power C[Gamma]^{(x) k}: legs -> coefficient.
struct TensorElement {
  GroupModel model;
  std::size_t legs = 2;
  std::map<std::vector<GroupElement>, cplx> terms;

  void add(std::vector<GroupElement> key, cplx alpha);
};

/// Delta(sum alpha_s s) = sum alpha_s s (x) s.
TensorElement coproduct(const GroupRingElement& x);
/// Applies Delta to one leg (0-based) of a tensor element.
TensorElement coproduct_on_leg(const TensorElement& t, std::size_t leg);

/// max |((Delta (x) id) Delta - (id (x) Delta) Delta)(x)| over coefficients.
double coassociativity_defect(const GroupRingElement& x);

/// Rank of span{Delta(s)(t (x) e) = st (x) s} restricted to coordinates
/// ball(R) x ball(R), with s in ball(R) and t in ball(2R).
std::size_t density_rank(const GroupModel& model, int radius, std::size_t budget = kDefaultElementBudget);

struct CoproductReport {
  std::string model;
  int radius = 0;
  int trials = 0;
  double max_coassociativity_defect = 0;
  std::size_t rank = 0;
  std::size_t target_rank = 0;

  bool pass() const { return max_coassociativity_defect == 0.0 && rank == target_rank; }
};

/// Random finitely supported element: `terms` atoms from ball(radius) with
/// Gaussian complex coefficients; deterministic in the seed.
GroupRingElement random_element(const GroupModel& model, int radius, int terms, std::uint64_t seed);

CoproductReport coproduct_checks(const GroupModel& model, int radius, int trials = 100, std::uint64_t seed = 0,
                                 std::size_t budget = kDefaultElementBudget);

}  // namespace icw
