#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "icw/function.hpp"
#include "icw/group.hpp"
#include "icw/types.hpp"

namespace icw {

/// Unitary representation given by the images of the generators.
class FiniteUnitaryRep {
 public:
  /// Validates unitarity and the defining relations of the model within tol.
  FiniteUnitaryRep(GroupModel model, std::vector<MatrixXc> images, double tol = 1e-10);

  static FiniteUnitaryRep trivial(const GroupModel& model, int dim = 1);

  const GroupModel& model() const { return model_; }
  int dim() const { return dim_; }
  const MatrixXc& image(int generator) const { return images_[static_cast<std::size_t>(generator)]; }
  const std::vector<MatrixXc>& images() const { return images_; }

  /// pi(s) applied to a vector, letter by letter from the right.
  VectorXc apply(const GroupElement& s, const VectorXc& v) const;

 private:
  MatrixXc letter_matrix(Letter l) const;

  GroupModel model_;
  int dim_;
  std::vector<MatrixXc> images_;
  // letter l's matrix, row-major with interleaved (re, im), for apply()
  std::vector<double> letter_data_;
};

MatrixXc evaluate_word(const FiniteUnitaryRep& pi, const GroupElement& s);

/// s -> <pi_s xi, eta> = eta^* pi(s) xi. When sup_radius >= 0 the sphere
/// sups up to that radius are attached as a SphereSupSequence certificate.
GroupFunction matrix_coefficient(const FiniteUnitaryRep& pi, const VectorXc& xi, const VectorXc& eta,
                                 int sup_radius = -1);

FiniteUnitaryRep tensor(const FiniteUnitaryRep& pi, const FiniteUnitaryRep& sigma);
FiniteUnitaryRep direct_sum(std::span<const FiniteUnitaryRep> reps);

/// Haar unitary: QR of a complex Gaussian matrix with the phases of R absorbed.
MatrixXc haar_unitary(int dim, std::mt19937_64& rng);

/// Random representation respecting the model's relations; deterministic in seed.
FiniteUnitaryRep random_rep(const GroupModel& model, int dim, std::uint64_t seed);
/// h(s) = <pi_s v, v> for a random rep and a random unit v; h(e) = 1.
GroupFunction random_pd(const GroupModel& model, int dim, std::uint64_t seed);

}  // namespace icw
