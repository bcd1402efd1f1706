#include <cmath>
#include <memory>

#include "doctest.h"
#include "icw/dynamics.hpp"
#include "icw/errors.hpp"
#include "icw/families.hpp"
#include "icw/ideal.hpp"
#include "support.hpp"

using namespace icw;

namespace {

GroupElement el(const GroupModel& m, const char* text) { return parse_element(m, text); }

FiniteSystem swap_system() { return FiniteSystem(GroupModel::cyclic(2), {{1, 0}}, {0.3333333333333333, 0.6666666666666666}); }

FiniteSystem rotation(std::vector<double> mu) {
  return FiniteSystem(GroupModel::free_abelian(1), {{1, 2, 0}}, std::move(mu));
}

VectorXc random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  VectorXc v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(gauss(rng), gauss(rng));
  return v;
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("rotation with uniform measure") {
    auto sys = rotation({1.0 / 3, 1.0 / 3, 1.0 / 3});
    auto z = sys.model();
    CHECK(sys.act(el(z, "a"), 0) == 1);
    CHECK(sys.act(el(z, "a^-1"), 0) == 2);
    CHECK(sys.act(el(z, "a^3"), 2) == 2);
    VectorXr rho = radon_nikodym(sys, el(z, "a"));
    for (int x = 0; x < 3; ++x) CHECK(rho(x) == doctest::Approx(1.0).epsilon(1e-15));
    SpectralGap gap = spectral_gap(covariant_rep(sys));
    CHECK(gap.fixed);
    CHECK(std::abs(gap.lambda_min) < 1e-12);
    for (int x = 0; x < 3; ++x) CHECK(std::abs(gap.vector(x) - 1.0) < 1e-12);
  }

  TEST_CASE("swap system values") {
    auto sys = swap_system();
    auto c2 = sys.model();
    VectorXr rho = radon_nikodym(sys, el(c2, "a"));
    CHECK(rho(0) == 2.0);
    CHECK(rho(1) == 0.5);
    VectorXr rho_e = radon_nikodym(sys, identity(c2));
    CHECK(rho_e(0) == 1.0);
    CHECK(rho_e(1) == 1.0);
    CHECK(defining_identity_defect(sys, el(c2, "a")) == 0.0);

    Envelopes env = envelopes(sys);
    CHECK(env.mode == "all");
    CHECK(env.upper(0) == 2.0);
    CHECK(env.upper(1) == 1.0);
    CHECK(env.lower(0) == 1.0);
    CHECK(env.lower(1) == 0.5);
    CHECK(env.integral_upper == 4.0 / 3.0);
    CHECK(env.argmax[0] == el(c2, "a"));

    Envelopes ball = envelopes(sys, 3);
    CHECK(ball.mode == "ball");
    CHECK(ball.upper == env.upper);
    CHECK(ball.lower == env.lower);
    CHECK(ball.last_change == 1);
    CHECK(ball.stabilized);
  }

  TEST_CASE("swap covariant representation") {
    auto sys = swap_system();
    CovariantRep u(sys);
    MatrixXr a = u.generator(0);
    CHECK(u.unitarity_defect(a) < 1e-15);
    CHECK((u.evaluate(el(sys.model(), "a^2")) - MatrixXr::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
    VectorXc mu_inv(2);
    mu_inv << 1.0 / std::sqrt(1.0 / 3), 1.0 / std::sqrt(2.0 / 3);
    VectorXc moved = a.cast<cplx>() * mu_inv;
    CHECK((moved - mu_inv).cwiseAbs().maxCoeff() < 1e-15);
    VectorXc f(2);
    f << cplx(1, 2), cplx(-3, 0.5);
    CHECK(u.covariance_defect(el(sys.model(), "a"), f) < 1e-15);
    SpectralGap gap = spectral_gap(u);
    CHECK(gap.fixed);
    // normalised fixed vector mu^{-1/2} / sqrt(2)
    CHECK(std::abs(gap.vector(0) - mu_inv(0) / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(gap.vector(1) - mu_inv(1) / std::sqrt(2.0)) < 1e-12);
  }

  TEST_CASE("spectral gap of a sign flip") {
    MatrixXc flip(1, 1);
    flip(0, 0) = -1.0;
    SpectralGap gap = spectral_gap(FiniteUnitaryRep(GroupModel::cyclic(2), {flip}));
    CHECK(gap.lambda_min == doctest::Approx(4.0));
    CHECK_FALSE(gap.fixed);
    CHECK(spectral_gap(FiniteUnitaryRep::trivial(GroupModel::free(2))).lambda_min == 0.0);
  }

  TEST_CASE("dn report on the swap system") {
    DnReport rep = dn_report(swap_system());
    CHECK(rep.upper_integrable);
    CHECK(rep.lower_positive);
    CHECK(rep.fixed_vector_exists);
    CHECK(rep.env.integral_upper == 4.0 / 3.0);
    REQUIRE(rep.candidates.size() == 3);
    for (const auto& c : rep.candidates) {
      CAPTURE(c.name);
      CHECK(c.fixed);
      CHECK(c.residual <= 1e-12);
    }
  }

  TEST_CASE("non-invariant rotation has no Radon-Nikodym trivialisation") {
    auto sys = rotation({0.2, 0.3, 0.5});
    auto z = sys.model();
    VectorXr rho = radon_nikodym(sys, el(z, "a"));
    CHECK(rho(0) == doctest::Approx(0.5 / 0.2));
    CHECK(rho(1) == doctest::Approx(0.2 / 0.3));
    Envelopes env = envelopes(sys);
    CHECK(env.upper(0) == doctest::Approx(2.5));
    CHECK(env.lower(2) == doctest::Approx(0.4));
    DnReport rep = dn_report(sys);
    CHECK(rep.fixed_vector_exists);
    bool mu_inv_fixed = false;
    for (const auto& c : rep.candidates)
      if (c.name == "mu_inv_sqrt") mu_inv_fixed = c.fixed;
    CHECK(mu_inv_fixed);
  }

  TEST_CASE("random systems satisfy the cocycle and covariance identities") {
    std::mt19937_64 rng(17);
    const std::vector<GroupModel> models{GroupModel::free(2), GroupModel::free_abelian(2), GroupModel::cyclic(5),
                                         GroupModel::infinite_dihedral()};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const GroupModel& m = models[seed % models.size()];
      FiniteSystem sys = random_system(m, 2 + static_cast<int>(seed % 6), seed);
      CovariantRep u(sys);
      for (int trial = 0; trial < 5; ++trial) {
        auto s = test::random_word(m, 4, rng), t = test::random_word(m, 4, rng);
        CHECK(defining_identity_defect(sys, s) < 1e-12);
        CHECK(chain_rule_defect(sys, s, t) < 1e-12);
        MatrixXr us = u.evaluate(s), ut = u.evaluate(t);
        CHECK((u.evaluate(compose(s, t)) - us * ut).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(u.unitarity_defect(us) < 1e-12);
        CHECK((u.adjoint(us) - u.evaluate(inverse(s))).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(u.covariance_defect(s, random_vector(sys.points(), rng)) < 1e-12);
      }
      SpectralGap gap = spectral_gap(u);
      CHECK(gap.fixed);
      DnReport rep = dn_report(sys);
      CHECK(rep.fixed_vector_exists);
      CHECK(rep.env.lower.minCoeff() > 0);
    }
  }

  TEST_CASE("system validation") {
    auto c2 = GroupModel::cyclic(2);
    CHECK_THROWS_AS(FiniteSystem(c2, {{0, 0}}, {0.5, 0.5}), InputError);
    CHECK_THROWS_AS(FiniteSystem(c2, {{1, 0}}, {0.5, 0.6}), InputError);
    CHECK_THROWS_AS(FiniteSystem(c2, {{1, 0}}, {1.0, 0.0}), InputError);
    CHECK_THROWS_AS(FiniteSystem(c2, {{1, 2}}, {0.5, 0.5}), InputError);
    CHECK_THROWS_AS(FiniteSystem(GroupModel::free(2), {{1, 0}}, {0.5, 0.5}), InputError);
    // a 3-cycle violates a^2 = e
    CHECK_THROWS_AS(FiniteSystem(c2, {{1, 2, 0}}, {0.2, 0.3, 0.5}), InputError);
    try {
      FiniteSystem(c2, {{1, 1}}, {0.5, 0.5});
      FAIL("expected InputError");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("action.a[1]") != std::string::npos);
    }
    // Z^2 generators must commute
    CHECK_THROWS_AS(FiniteSystem(GroupModel::free_abelian(2), {{1, 0, 2}, {0, 2, 1}}, {0.2, 0.3, 0.5}), InputError);
  }

  TEST_CASE("groupoid positive definiteness") {
    auto sys = std::make_shared<const FiniteSystem>(random_system(GroupModel::free(2), 5, 3));
    auto f2 = sys->model();
    Ball b(f2, 2);
    CHECK(groupoid_pd_check(lift(sys, haagerup(f2, 1)), b.elements()).pass);
    auto negative = GroupoidFunction(
        sys, [](int x, const GroupElement& s) { return word_length(s) == 0 ? cplx(x == 1 ? -1.0 : 1.0) : cplx(0.0); },
        FiniteSupport{0}, "signed delta");
    std::vector<GroupElement> unit{identity(f2)};
    GroupoidPdVerdict v = groupoid_pd_check(negative, unit);
    CHECK_FALSE(v.pass);
    CHECK(v.first_failure == 1);
    CHECK(v.per_point[0].pass());
    std::vector<GroupElement> twice{identity(f2), identity(f2)};
    CHECK_THROWS_AS(groupoid_pd_check(negative, twice), std::invalid_argument);
  }

  TEST_CASE("groupoid schur multiplier and sup-norm profile") {
    auto sys = std::make_shared<const FiniteSystem>(rotation({0.2, 0.3, 0.5}));
    auto z = sys->model();
    auto h = lift(sys, haagerup(z, 1));
    GroupoidElement a{z, 3, {}};
    VectorXc f(3);
    f << 1.0, 2.0, 3.0;
    a.terms.emplace(identity(z), f);
    a.terms.emplace(el(z, "a^2"), f);
    GroupoidElement out = groupoid_schur_multiply(h, a);
    CHECK((out.terms.at(identity(z)) - f).norm() == 0.0);
    CHECK((out.terms.at(el(z, "a^2")) - f * std::exp(-2.0)).norm() < 1e-15);

    auto weighted = GroupoidFunction(
        sys, [](int x, const GroupElement& s) { return cplx(0.5 * (x + 1) * std::exp(-word_length(s))); },
        ExpDecay{1.5, std::exp(-1.0), false}, "weighted");
    GroupFunction H = sup_norm_profile(weighted);
    CHECK(std::abs(H(el(z, "a^3")) - 1.5 * std::exp(-3.0)) < 1e-15);
    CHECK(ideal_membership(H, IdealSpec::c0()).member());
  }

  TEST_CASE("states composed with groupoid multipliers are positive definite") {
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto sys = std::make_shared<const FiniteSystem>(random_system(GroupModel::free(2), 4, seed));
      auto f2 = sys->model();
      Ball b(f2, 2);
      auto h = lift(sys, random_pd(f2, 2, seed));
      MatrixXc k = state_kernel(h, random_vector(4, rng), b.elements());
      CHECK(psd_verdict(k, 1e-8).pass());
    }
  }

  TEST_CASE("action certificates") {
    auto f2 = GroupModel::free(2);
    auto sys = std::make_shared<const FiniteSystem>(random_system(f2, 7, 11));
    std::vector<GroupoidFunction> haag;
    for (int n = 1; n <= 8; ++n) haag.push_back(lift(sys, haagerup(f2, n)));
    auto at = action_certificate(ActionKind::ATmenable, haag, 2, default_thresholds(haag.size()));
    CHECK(at.accepted);
    CHECK_FALSE(action_certificate(ActionKind::Amenable, haag, 2, default_thresholds(haag.size())).accepted);

    auto rot = std::make_shared<const FiniteSystem>(rotation({0.2, 0.3, 0.5}));
    auto z = rot->model();
    std::vector<GroupoidFunction> folner;
    for (int side = 2; side <= 8; ++side) folner.push_back(lift(rot, folner_box(z, side)));
    CHECK(action_certificate(ActionKind::Amenable, folner, 1, default_thresholds(folner.size())).accepted);

    std::vector<GroupoidFunction> floor{lift(sys, constant(f2, 0.5)), lift(sys, constant(f2, 0.5))};
    auto rej = action_certificate(ActionKind::ATmenable, floor, 2, {1.0, 0.9});
    CHECK_FALSE(rej.accepted);
    CHECK(rej.checks[0].membership.verdict == Membership::NonMember);
  }
}
