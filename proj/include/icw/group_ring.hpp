#pragma once

#include <map>
#include <string_view>
#include <vector>

#include "icw/group.hpp"
#include "icw/types.hpp"

namespace icw {

/// Finitely supported formal sum x = sum_s alpha_s s. Zero coefficients are never stored.
class GroupRingElement {
 public:
  using Terms = std::map<GroupElement, cplx>;

  explicit GroupRingElement(GroupModel model) : model_(model) {}

  const GroupModel& model() const { return model_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  cplx coefficient(const GroupElement& s) const;
  void add(const GroupElement& s, cplx alpha);

  /// Largest word length in the support (0 for the empty element).
  int support_radius() const;

  GroupRingElement adjoint() const;  // sum conj(alpha_s) s^{-1}

  GroupRingElement& operator+=(const GroupRingElement& other);
  GroupRingElement& operator*=(cplx scalar);

  friend bool operator==(const GroupRingElement& a, const GroupRingElement& b) {
    return a.model_ == b.model_ && a.terms_ == b.terms_;
  }

 private:
  GroupModel model_;
  Terms terms_;
};

GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b);
GroupRingElement operator-(GroupRingElement a, const GroupRingElement& b);
GroupRingElement operator*(cplx scalar, GroupRingElement x);
/// Convolution product in C[Gamma].
GroupRingElement operator*(const GroupRingElement& x, const GroupRingElement& y);

GroupRingElement delta(const GroupElement& s, cplx alpha = 1.0);
/// Sum of the symmetric generating set.
GroupRingElement gensum(const GroupModel& model);

/// sum_s alpha_s: the value of the trivial representation.
cplx coefficient_sum(const GroupRingElement& x);

/// "gensum", "e", "a + a^-1", "2*a - 0.5*ab^-1 + 3".
GroupRingElement parse_group_ring(const GroupModel& model, std::string_view text);
std::string to_string(const GroupRingElement& x);

/// A homomorphism given by images of the source generators.
class Homomorphism {
 public:
  /// Throws InvalidHomomorphism naming the first relator that does not map to e.
  Homomorphism(GroupModel source, GroupModel target, std::vector<GroupElement> images);

  static Homomorphism identity(const GroupModel& model);
  /// Abelianization F_m -> Z^m (or Z^m -> Z^m).
  static Homomorphism abelianization(const GroupModel& source);

  const GroupModel& source() const { return source_; }
  const GroupModel& target() const { return target_; }

  GroupElement operator()(const GroupElement& s) const;

 private:
  GroupElement image_of_word(std::string_view letters) const;

  GroupModel source_;
  GroupModel target_;
  std::vector<GroupElement> images_;
  std::vector<GroupElement> inverse_images_;
};

GroupRingElement hom_pushforward(const Homomorphism& phi, const GroupRingElement& x);

}  // namespace icw
