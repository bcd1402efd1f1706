#pragma once

#include <random>
#include <map>
#include <string>
#include <vector>

#include "icw/group.hpp"

namespace icw::test {

/// Every product of at most R generators with the fewest letters needed to
/// reach it. Independent of Ball.
inline std::map<GroupElement, int> brute_force_ball(const GroupModel& model, int radius) {
  std::map<GroupElement, int> out{{identity(model), 0}};
  std::vector<GroupElement> frontier{identity(model)};
  const auto letters = model.generating_set();
  for (int k = 0; k < radius; ++k) {
    std::vector<GroupElement> next;
    for (const auto& w : frontier)
      for (Letter l : letters) next.push_back(compose(w, generator(model, l / 2, l & 1)));
    for (const auto& s : next) out.emplace(s, k + 1);
    frontier = std::move(next);
  }
  return out;
}

/// Product of `length` random generators (not necessarily reduced).
inline GroupElement random_word(const GroupModel& model, int length, std::mt19937_64& rng) {
  const auto letters = model.generating_set();
  std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
  GroupElement s = identity(model);
  for (int i = 0; i < length; ++i) {
    Letter l = letters[pick(rng)];
    s = compose(s, generator(model, l / 2, l & 1));
  }
  return s;
}

inline std::vector<GroupModel> all_models() {
  return {GroupModel::free(2), GroupModel::free(3), GroupModel::free_abelian(2), GroupModel::free_abelian(1),
          GroupModel::cyclic(5), GroupModel::infinite_dihedral()};
}

}  // namespace icw::test
