#include <cmath>

#include "doctest.h"
#include "icw/certificate.hpp"
#include "icw/coproduct.hpp"
#include "icw/errors.hpp"
#include "icw/families.hpp"
#include "icw/norms.hpp"
#include "icw/representation.hpp"
#include "support.hpp"

using namespace icw;

namespace {

GroupRingElement ring(const GroupModel& m, const char* text) { return parse_group_ring(m, text); }

std::vector<GroupFunction> haagerup_family(const GroupModel& m, int count) {
  std::vector<GroupFunction> out;
  for (int n = 1; n <= count; ++n) out.push_back(haagerup(m, n));
  return out;
}

}  // namespace

TEST_SUITE("completions") {
  TEST_CASE("reduced norm lower bound examples") {
    auto f2 = GroupModel::free(2);
    CHECK(reduced_norm_lower(ring(f2, "e"), 3).value == doctest::Approx(1.0).epsilon(1e-10));
    auto z = GroupModel::free_abelian(1);
    NormEstimate zn = reduced_norm_lower(gensum(z), 100);
    CHECK(zn.value >= 1.99);
    CHECK(zn.value <= 2.0 + 1e-10);
    CHECK(zn.kind == NormEstimate::Kind::LowerBound);
    CHECK(zn.radius == 100);
  }

  TEST_CASE("reduced norm lower bound is monotone and below the upper bounds") {
    auto f2 = GroupModel::free(2);
    double r4 = reduced_norm_lower(gensum(f2), 4).value;
    double r8 = reduced_norm_lower(gensum(f2), 8).value;
    CHECK(r4 < r8);
    CHECK(r8 <= 2 * std::sqrt(3.0) + 1e-8);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto x = random_element(f2, 2, 5, seed);
      double lower = reduced_norm_lower(x, 4).value;
      CHECK(lower <= haagerup_upper_bound(x).value + 1e-8);
      CHECK(lower <= reduced_norm_upper(x).value + 1e-8);
      CHECK(reduced_norm_lower(x, 2).value <= lower + 1e-8);
    }
  }

  TEST_CASE("haagerup upper bound examples") {
    auto f2 = GroupModel::free(2);
    CHECK(haagerup_upper_bound(ring(f2, "e")).value == doctest::Approx(1.0));
    CHECK(haagerup_upper_bound(ring(f2, "a")).value == doctest::Approx(2.0));
    CHECK(haagerup_upper_bound(gensum(f2)).value == doctest::Approx(4.0));
    CHECK(haagerup_upper_bound(gensum(f2)).kind == NormEstimate::Kind::UpperBound);
    CHECK_THROWS_AS(haagerup_upper_bound(gensum(GroupModel::free_abelian(2))), Unsupported);
    // the Schur test recovers the Kesten value for the generator sum
    CHECK(reduced_norm_upper(gensum(f2)).value <= 2 * std::sqrt(3.0) + 1e-6);
  }

  TEST_CASE("trivial norm examples") {
    auto f2 = GroupModel::free(2);
    NormEstimate t = trivial_norm(gensum(f2));
    CHECK(t.value == 4.0);
    CHECK(t.kind == NormEstimate::Kind::Exact);
    NormEstimate mixed = trivial_norm(ring(f2, "a - b"));
    CHECK(mixed.value == 0.0);
    CHECK(mixed.kind == NormEstimate::Kind::LowerBound);
  }

  TEST_CASE("trivial norm is invariant under pushforward") {
    auto f2 = GroupModel::free(2);
    auto ab = Homomorphism::abelianization(f2);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto x = random_element(f2, 3, 6, seed);
      CHECK(std::abs(trivial_norm(hom_pushforward(ab, x)).value - trivial_norm(x).value) < 1e-12);
    }
  }

  TEST_CASE("GNS norm examples") {
    auto f2 = GroupModel::free(2);
    auto x = gensum(f2);
    NormEstimate regular = gns_norm_lower(delta_e(f2), x, 4);
    CHECK(regular.value == doctest::Approx(reduced_norm_lower(x, 4).value).epsilon(1e-6));
    CHECK(gns_norm_lower(constant(f2, 1.0), x, 2).value == doctest::Approx(4.0).epsilon(1e-10));
    // a C0 function whose GNS norm beats the reduced norm
    CHECK(gns_norm_lower(haagerup(f2, 4), x, 3).value > 2 * std::sqrt(3.0) + 1e-3);
    CHECK_THROWS_AS(gns_norm_lower(make_family(f2, "neg-wordlength"), x, 2), NotPositiveDefinite);
  }

  TEST_CASE("GNS context matches the one-shot estimate") {
    auto f2 = GroupModel::free(2);
    auto h = haagerup(f2, 2);
    GnsNormContext ctx(h, 2, 2);
    CHECK(ctx.real_kernel());
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto x = random_element(f2, 2, 4, seed);
      CHECK(ctx.estimate(x).value == doctest::Approx(gns_norm_lower(h, x, 2).value).epsilon(1e-10));
    }
  }

  TEST_CASE("GNS norms of complex elements on real kernels") {
    auto f2 = GroupModel::free(2);
    auto h = haagerup(f2, 1);
    GnsNormContext ctx(h, 3, 1);
    REQUIRE(ctx.real_kernel());
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto x = random_element(f2, 1, 4, seed);
      const double v = ctx.estimate(x).value;
      CHECK(ctx.estimate(cplx(0.0, 1.0) * x).value == doctest::Approx(v).epsilon(1e-10));
      CHECK(ctx.estimate(std::polar(1.0, 0.7) * x).value == doctest::Approx(v).epsilon(1e-10));
      CHECK(v > 0);
      CHECK(std::abs(gns_norm_lower(delta_e(f2), x, 3).value - reduced_norm_lower(x, 3).value) < 1e-6);
    }
    auto hc = random_pd(f2, 2, 3);
    GnsNormContext complex_ctx(hc, 3, 1);
    CHECK_FALSE(complex_ctx.real_kernel());
    auto x = random_element(f2, 1, 4, 11);
    CHECK(complex_ctx.estimate(cplx(0.0, 1.0) * x).value ==
          doctest::Approx(complex_ctx.estimate(x).value).epsilon(1e-10));
  }

  TEST_CASE("norm gap report") {
    auto f2 = GroupModel::free(2);
    GapConfig cfg;
    cfg.reduced_radius = 6;
    NormGapReport rep = norm_gap_report(gensum(f2), IdealSpec::c0(), cfg);
    CHECK(rep.verdict == "gap");
    CHECK(rep.gap);
    CHECK(rep.d_exceeds_reduced);
    REQUIRE(rep.best_gns);
    CHECK(rep.best_gns->value <= 4.0 + 1e-8);

    NormGapReport unit = norm_gap_report(ring(f2, "e"), IdealSpec::c0(), cfg);
    CHECK(unit.verdict == "no_gap");
    CHECK_FALSE(unit.gap);

    GapConfig line;
    line.reduced_radius = 100;
    CHECK(norm_gap_report(gensum(GroupModel::free_abelian(1)), IdealSpec::cc(), line).verdict == "no_gap");
  }

  TEST_CASE("larger ideals give larger completion norms") {
    auto f2 = GroupModel::free(2);
    GapConfig cfg;
    cfg.reduced_radius = 4;
    auto c0 = norm_gap_report(gensum(f2), IdealSpec::c0(), cfg);
    auto cc = norm_gap_report(gensum(f2), IdealSpec::cc(), cfg);
    REQUIRE(c0.best_gns);
    REQUIRE(cc.best_gns);
    CHECK(c0.best_gns->value >= cc.best_gns->value - 1e-12);
    for (const auto& e : cc.family)
      if (e.label.rfind("haagerup", 0) == 0) CHECK_FALSE(e.skipped.empty());
  }

  TEST_CASE("schur multiply and state composition") {
    auto f2 = GroupModel::free(2);
    auto x = ring(f2, "2*e + a - 3*ab");
    CHECK(schur_multiply(delta_e(f2), x) == ring(f2, "2*e"));
    CHECK(schur_multiply(constant(f2, 1.0), x) == x);
    auto damped = schur_multiply(haagerup(f2, 1), gensum(f2));
    for (const auto& [s, alpha] : damped.terms()) CHECK(std::abs(alpha - std::exp(-1.0)) < 1e-15);

    auto composed = state_compose(haagerup(f2, 2), haagerup(f2, 2));
    Ball b(f2, 3);
    for (const auto& s : b.elements()) CHECK(std::abs(composed(s) - haagerup(f2, 1)(s)) < 1e-14);
    CHECK_THROWS_AS(state_compose(constant(f2, 2.0), haagerup(f2, 1)), std::invalid_argument);
  }

  TEST_CASE("equality certificates accept the standard witnesses") {
    auto z2 = GroupModel::free_abelian(2);
    std::vector<GroupFunction> folner;
    for (int side = 2; side <= 10; ++side) folner.push_back(folner_box(z2, side));
    auto amen = equality_certificate(IdealSpec::cc(), folner, 1, default_thresholds(folner.size()));
    CHECK(amen.accepted);
    CHECK(amen.witness == "amenability witness");

    auto f2 = GroupModel::free(2);
    auto fam = haagerup_family(f2, 10);
    auto haag = equality_certificate(IdealSpec::c0(), fam, 3, default_thresholds(fam.size()));
    CHECK(haag.accepted);
    CHECK(haag.witness == "Haagerup witness");
    for (const auto& c : haag.checks) CHECK(c.pass());

    auto wrong = equality_certificate(IdealSpec::cc(), fam, 3, default_thresholds(fam.size()));
    CHECK_FALSE(wrong.accepted);
    CHECK_FALSE(wrong.failures.empty());

    std::vector<GroupFunction> t_family;
    for (int n = 1; n <= 10; ++n) t_family.push_back(schoenberg_word_length(f2, 1.0 / n));
    auto t = equality_certificate(IdealSpec::t_ideal(), t_family, 3, default_thresholds(t_family.size()));
    CHECK(t.accepted);
    CHECK(t.witness == "Property-(T)-ideal witness");
  }

  TEST_CASE("equality certificates reject corrupted families") {
    auto f2 = GroupModel::free(2);
    auto fam = haagerup_family(f2, 6);
    auto th = default_thresholds(fam.size());

    auto reversed = fam;
    std::reverse(reversed.begin(), reversed.end());
    CHECK_FALSE(equality_certificate(IdealSpec::c0(), reversed, 3, th).accepted);

    auto not_pd = fam;
    not_pd[3] = table_function(f2, {{identity(f2), 1.0}, {parse_element(f2, "a"), 2.0}}, FiniteSupport{1}, "bad");
    auto rej = equality_certificate(IdealSpec::c0(), not_pd, 3, th);
    CHECK_FALSE(rej.accepted);
    CHECK_FALSE(rej.checks[3].pd.pass());

    auto flat = th;
    flat[2] = flat[1];
    CHECK_FALSE(equality_certificate(IdealSpec::c0(), fam, 3, flat).accepted);
    CHECK_THROWS_AS(equality_certificate(IdealSpec::c0(), fam, 3, {1.0}), std::invalid_argument);
  }

  TEST_CASE("coproduct examples") {
    auto f2 = GroupModel::free(2);
    TensorElement d = coproduct(ring(f2, "2*a - b"));
    CHECK(d.terms.size() == 2);
    CHECK(d.terms.at({parse_element(f2, "a"), parse_element(f2, "a")}) == cplx(2.0));
    CHECK(d.terms.at({parse_element(f2, "b"), parse_element(f2, "b")}) == cplx(-1.0));
    TensorElement left = coproduct_on_leg(d, 0), right = coproduct_on_leg(d, 1);
    CHECK(left.legs == 3);
    CHECK(left.terms == right.terms);
    for (std::uint64_t seed = 0; seed < 20; ++seed)
      CHECK(coassociativity_defect(random_element(f2, 3, 8, seed)) == 0.0);
  }

  TEST_CASE("coproduct density ranks") {
    CHECK(density_rank(GroupModel::free_abelian(1), 2) == 25);
    CHECK(density_rank(GroupModel::free(2), 1) == 25);
    CHECK(density_rank(GroupModel::cyclic(5), 3) == 25);
    auto rep = coproduct_checks(GroupModel::free(2), 1, 30);
    CHECK(rep.pass());
    CHECK(rep.target_rank == 25);
  }

  TEST_CASE("random elements are deterministic") {
    auto f2 = GroupModel::free(2);
    CHECK(random_element(f2, 3, 6, 7) == random_element(f2, 3, 6, 7));
    CHECK_FALSE(random_element(f2, 3, 6, 7) == random_element(f2, 3, 6, 8));
    CHECK(random_element(f2, 3, 6, 7).support_radius() <= 3);
  }
}
