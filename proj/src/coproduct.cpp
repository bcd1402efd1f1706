#include "icw/coproduct.hpp"

#include <random>

#include <Eigen/LU>

#include "icw/errors.hpp"

namespace icw {

void TensorElement::add(std::vector<GroupElement> key, cplx alpha) {
  auto [it, inserted] = terms.emplace(std::move(key), alpha);
  if (!inserted) it->second += alpha;
  if (it->second == cplx{}) terms.erase(it);
}

TensorElement coproduct(const GroupRingElement& x) {
  TensorElement t{x.model(), 2, {}};
  for (const auto& [s, alpha] : x.terms()) t.add({s, s}, alpha);
  return t;
}

TensorElement coproduct_on_leg(const TensorElement& t, std::size_t leg) {
  if (leg >= t.legs) throw std::out_of_range("tensor leg out of range");
  TensorElement out{t.model, t.legs + 1, {}};
  for (const auto& [key, alpha] : t.terms) {
    std::vector<GroupElement> k = key;
    k.insert(k.begin() + static_cast<std::ptrdiff_t>(leg), key[leg]);
    out.add(std::move(k), alpha);
  }
  return out;
}

double coassociativity_defect(const GroupRingElement& x) {
  TensorElement d = coproduct(x);
  TensorElement left = coproduct_on_leg(d, 0);
  TensorElement right = coproduct_on_leg(d, 1);
  double defect = 0;
  for (const auto& [k, a] : left.terms) {
    auto it = right.terms.find(k);
    defect = std::max(defect, std::abs(a - (it == right.terms.end() ? cplx{} : it->second)));
  }
  for (const auto& [k, a] : right.terms)
    if (!left.terms.count(k)) defect = std::max(defect, std::abs(a));
  return defect;
}

std::size_t density_rank(const GroupModel& model, int radius, std::size_t budget) {
  Ball b(model, radius, budget);
  Ball pad(model, 2 * radius, budget);
  const std::size_t n = b.size();
  const double cells = static_cast<double>(n) * n * static_cast<double>(n) * static_cast<double>(pad.size());
  if (cells > static_cast<double>(budget) * 64) throw BudgetExceeded(static_cast<std::size_t>(cells), budget * 64);
  // column (s, t) has a single 1 at coordinate (st, s) when st lies in ball(R)
  std::vector<Eigen::Index> rows;
  for (std::size_t si = 0; si < n; ++si)
    for (const auto& t : pad.elements()) {
      auto u = b.index_of(compose(b[si], t));
      if (u != Ball::npos) rows.push_back(static_cast<Eigen::Index>(u * n + si));
    }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n * n), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t c = 0; c < rows.size(); ++c) m(rows[c], static_cast<Eigen::Index>(c)) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  return static_cast<std::size_t>(lu.rank());
}

GroupRingElement random_element(const GroupModel& model, int radius, int terms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Ball b(model, radius);
  std::uniform_int_distribution<std::size_t> pick(0, b.size() - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  GroupRingElement x(model);
  for (int i = 0; i < terms; ++i) {
    const GroupElement& s = b[pick(rng)];
    double re = gauss(rng);
    double im = gauss(rng);
    x.add(s, cplx(re, im));
  }
  return x;
}

CoproductReport coproduct_checks(const GroupModel& model, int radius, int trials, std::uint64_t seed,
                                 std::size_t budget) {
  CoproductReport rep;
  rep.model = model.name();
  rep.radius = radius;
  rep.trials = trials;
  for (int i = 0; i < trials; ++i)
    rep.max_coassociativity_defect =
        std::max(rep.max_coassociativity_defect, coassociativity_defect(random_element(model, radius + 1, 6, seed + i)));
  Ball b(model, radius, budget);
  rep.target_rank = b.size() * b.size();
  rep.rank = density_rank(model, radius, budget);
  return rep;
}

}  // namespace icw
