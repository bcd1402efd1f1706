#include <cmath>
#include <numbers>
#include <unsupported/Eigen/KroneckerProduct>

#include "doctest.h"
#include "icw/errors.hpp"
#include "icw/families.hpp"
#include "icw/gns.hpp"
#include "icw/representation.hpp"
#include "support.hpp"

using namespace icw;

namespace {

GroupElement el(const GroupModel& m, const char* text) { return parse_element(m, text); }

FiniteUnitaryRep character(const GroupModel& z, double theta) {
  MatrixXc u(1, 1);
  u(0, 0) = std::polar(1.0, theta);
  return FiniteUnitaryRep(z, {u});
}

VectorXc random_unit(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  VectorXc v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cplx(gauss(rng), gauss(rng));
  return v / v.norm();
}

double max_diff(const GroupFunction& a, const GroupFunction& b, const Ball& ball) {
  double d = 0;
  for (const auto& s : ball.elements()) d = std::max(d, std::abs(a(s) - b(s)));
  return d;
}

}  // namespace

TEST_SUITE("representations") {
  TEST_CASE("evaluate_word examples") {
    auto f2 = GroupModel::free(2);
    auto pi = random_rep(f2, 3, 11);
    CHECK((evaluate_word(pi, identity(f2)) - MatrixXc::Identity(3, 3)).norm() == 0.0);
    auto z = GroupModel::free_abelian(1);
    const double theta = 0.37;
    auto chi = character(z, theta);
    for (int k = -5; k <= 5; ++k) {
      GroupElement s = parse_element(z, ("a^" + std::to_string(k)).c_str());
      CHECK(std::abs(evaluate_word(chi, s)(0, 0) - std::polar(1.0, k * theta)) < 1e-13);
    }
    auto triv = FiniteUnitaryRep::trivial(f2);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 20; ++i) CHECK(evaluate_word(triv, test::random_word(f2, 6, rng))(0, 0) == cplx(1.0));
  }

  TEST_CASE("evaluate_word is a homomorphism") {
    std::mt19937_64 rng(4);
    for (const auto& m : test::all_models()) {
      auto pi = random_rep(m, 3, 5);
      for (int i = 0; i < 20; ++i) {
        auto s = test::random_word(m, 5, rng), t = test::random_word(m, 5, rng);
        CHECK((evaluate_word(pi, compose(s, t)) - evaluate_word(pi, s) * evaluate_word(pi, t)).cwiseAbs().maxCoeff() <
              1e-12);
        CHECK((evaluate_word(pi, inverse(s)) - evaluate_word(pi, s).adjoint()).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }

  TEST_CASE("representation validation") {
    auto z2 = GroupModel::free_abelian(2);
    std::mt19937_64 rng(1);
    MatrixXc u = haar_unitary(2, rng), v = haar_unitary(2, rng);
    CHECK_THROWS_AS(FiniteUnitaryRep(z2, {u, v}), InvalidHomomorphism);
    CHECK_NOTHROW(FiniteUnitaryRep(z2, {u, u * u}));
    MatrixXc bad = u;
    bad(0, 0) *= 1.01;
    CHECK_THROWS_AS(FiniteUnitaryRep(GroupModel::free(1), {bad}), InputError);
    CHECK_THROWS_AS(FiniteUnitaryRep(GroupModel::free(2), {u}), InputError);
    MatrixXc flip(1, 1);
    flip(0, 0) = -1.0;
    CHECK_NOTHROW(FiniteUnitaryRep(GroupModel::cyclic(2), {flip}));
    CHECK_THROWS_AS(FiniteUnitaryRep(GroupModel::cyclic(3), {flip}), InvalidHomomorphism);
    for (const auto& m : test::all_models()) CHECK_NOTHROW(random_rep(m, 4, 9));
  }

  TEST_CASE("matrix coefficient examples") {
    auto f2 = GroupModel::free(2);
    Ball b(f2, 3);
    VectorXc one = VectorXc::Ones(1);
    auto c = matrix_coefficient(FiniteUnitaryRep::trivial(f2), one, one);
    for (const auto& s : b.elements()) CHECK(c(s) == cplx(1.0));
    auto pi = random_rep(f2, 4, 3);
    VectorXc xi = random_unit(4, 8);
    auto h = matrix_coefficient(pi, xi, xi);
    CHECK(std::abs(h(identity(f2)) - 1.0) < 1e-14);
    for (const auto& s : b.elements()) CHECK(std::abs(h(s)) <= 1.0 + 1e-12);
  }

  TEST_CASE("matrix coefficient is sesquilinear") {
    auto f2 = GroupModel::free(2);
    auto pi = random_rep(f2, 3, 21);
    Ball b(f2, 3);
    std::vector<VectorXc> v{random_unit(3, 1), random_unit(3, 2)}, w{random_unit(3, 3), random_unit(3, 4)};
    std::vector<cplx> alpha{{0.3, -1.2}, {2.0, 0.5}}, beta{{-0.7, 0.1}, {1.1, 1.9}};
    VectorXc xi = alpha[0] * v[0] + alpha[1] * v[1];
    VectorXc eta = beta[0] * w[0] + beta[1] * w[1];
    auto lhs = matrix_coefficient(pi, xi, eta);
    for (const auto& s : b.elements()) {
      cplx rhs = 0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) rhs += alpha[i] * std::conj(beta[j]) * matrix_coefficient(pi, v[i], w[j])(s);
      CHECK(std::abs(lhs(s) - rhs) < 1e-12);
    }
  }

  TEST_CASE("tensor and direct sum") {
    auto f2 = GroupModel::free(2);
    Ball b(f2, 3);
    auto pi = random_rep(f2, 2, 31), sigma = random_rep(f2, 3, 32);
    VectorXc v1 = random_unit(2, 1), v2 = random_unit(2, 2), w1 = random_unit(3, 3), w2 = random_unit(3, 4);
    auto t = tensor(pi, sigma);
    VectorXc x = Eigen::kroneckerProduct(v1, w1), y = Eigen::kroneckerProduct(v2, w2);
    auto prod = product(matrix_coefficient(pi, v1, v2), matrix_coefficient(sigma, w1, w2));
    CHECK(max_diff(matrix_coefficient(t, x, y), prod, b) < 1e-12);

    VectorXc one = VectorXc::Ones(1);
    auto tt = tensor(FiniteUnitaryRep::trivial(f2), pi);
    CHECK(max_diff(matrix_coefficient(tt, v1, v2), matrix_coefficient(pi, v1, v2), b) < 1e-12);

    std::vector<FiniteUnitaryRep> reps{pi, pi};
    auto sum = direct_sum(reps);
    CHECK(sum.dim() == 4);
    VectorXc xs = VectorXc::Zero(4), ys = VectorXc::Zero(4);
    xs.head(2) = v1;
    ys.head(2) = v2;
    CHECK(max_diff(matrix_coefficient(sum, xs, ys), matrix_coefficient(pi, v1, v2), b) < 1e-12);

    auto z = GroupModel::free_abelian(1);
    auto chi = tensor(character(z, 0.4), character(z, 1.1));
    CHECK(std::abs(chi.image(0)(0, 0) - std::polar(1.0, 1.5)) < 1e-15);
  }

  TEST_CASE("random_pd examples") {
    auto f2 = GroupModel::free(2);
    Ball b(f2, 3);
    auto h1 = random_pd(f2, 1, 5);
    for (const auto& s : b.elements()) CHECK(std::abs(std::abs(h1(s)) - 1.0) < 1e-12);
    auto h = random_pd(f2, 4, 42);
    PsdVerdict v = pd_window_check(h, b.elements());
    CHECK(v.pass());
    CHECK(v.min_eigenvalue >= -1e-10);
    CHECK(std::abs(h(identity(f2)) - 1.0) < 1e-14);
    auto again = random_pd(f2, 4, 42);
    for (const auto& s : b.elements()) CHECK(again(s) == h(s));
    auto other = random_pd(f2, 4, 43);
    CHECK(max_diff(other, h, b) > 1e-3);
  }

  TEST_CASE("random_pd is positive definite on every model") {
    for (const auto& m : test::all_models())
      for (std::uint64_t seed = 0; seed < 4; ++seed)
        CHECK(pd_window_check(random_pd(m, 3, seed), Ball(m, 3).elements()).pass());
  }

  TEST_CASE("GNS of delta_e is the truncated regular representation") {
    auto f2 = GroupModel::free(2);
    GnsWindow w(delta_e(f2), 2, 1);
    CHECK((w.gram() - MatrixXc::Identity(17, 17)).norm() == 0.0);
    CHECK(w.rank() == 17);
    MatrixXc a = w.compressed(el(f2, "a"));
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      int ones = 0;
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        CHECK((a(i, j) == cplx(0.0) || a(i, j) == cplx(1.0)));
        ones += a(i, j) == cplx(1.0);
      }
      GroupElement target = compose(el(f2, "a"), w.ball()[static_cast<std::size_t>(j)]);
      CHECK(ones == (w.ball().contains(target) ? 1 : 0));
    }
  }

  TEST_CASE("GNS of the constant function is one-dimensional") {
    auto f2 = GroupModel::free(2);
    GnsWindow w(constant(f2, 1.0), 2, 1);
    CHECK(w.rank() == 1);
    VectorXc de = w.delta(identity(f2));
    for (const char* g : {"a", "b^-1"}) {
      VectorXc moved = w.compressed(el(f2, g)) * de;
      VectorXc diff = moved - de;
      CHECK(std::abs(w.inner(diff, diff)) < 1e-10);
    }
  }

  TEST_CASE("GNS coefficient recovery") {
    auto f2 = GroupModel::free(2);
    GnsWindow w(haagerup(f2, 1), 3, 1);
    VectorXc de = w.delta(identity(f2));
    CHECK(std::abs(w.coefficient(el(f2, "a"), de, de) - std::exp(-1.0)) < 1e-15);
    for (const auto& h : {delta_e(f2), haagerup(f2, 1), random_pd(f2, 4, 42)}) {
      GnsWindow g(h, 3, 3);
      VectorXc d = g.delta(identity(f2));
      for (const auto& s : g.ball().elements()) CHECK(std::abs(g.coefficient(s, d, d) - h(s)) < 1e-12);
    }
  }

  TEST_CASE("GNS cyclic translate identity") {
    auto f2 = GroupModel::free(2);
    auto h = random_pd(f2, 3, 8);
    GnsWindow w(h, 2, 2);
    Ball unit(f2, 1), window(f2, 2);
    for (const auto& s : window.elements())
      for (const auto& g1 : unit.elements())
        for (const auto& g2 : unit.elements())
          CHECK(std::abs(w.coefficient(s, w.delta(g1), w.delta(g2)) - h(compose(inverse(g2), compose(s, g1)))) < 1e-12);
  }

  TEST_CASE("GNS multiplicativity where untruncated") {
    auto f2 = GroupModel::free(2);
    const int radius = 3, pad = 1;
    for (const auto& h : {haagerup(f2, 2), random_pd(f2, 2, 4)}) {
      GnsWindow w(h, radius, pad);
      Ball unit(f2, pad), inner(f2, radius - pad);
      for (const auto& g : unit.elements())
        for (const auto& g2 : unit.elements()) {
          if (word_length(compose(g, g2)) > pad) continue;
          for (const auto& s : inner.elements()) {
            VectorXc xi = w.delta(s);
            VectorXc lhs = w.compressed(g) * (w.compressed(g2) * xi);
            VectorXc rhs = w.compressed(compose(g, g2)) * xi;
            VectorXc diff = lhs - rhs;
            CHECK(std::abs(w.inner(diff, diff)) < 1e-8);
          }
        }
    }
  }

  TEST_CASE("Gram consistency with the window check") {
    auto f2 = GroupModel::free(2);
    for (const auto& h : {haagerup(f2, 1), random_pd(f2, 2, 1), make_family(f2, "neg-wordlength")}) {
      bool window = pd_window_check(h, Ball(f2, 3).elements()).pass();
      bool gram = true;
      try {
        GnsWindow w(h, 2, 1);
        gram = psd_verdict(w.gram()).pass();
      } catch (const NotPositiveDefinite& e) {
        gram = false;
        CHECK(e.min_eigenvalue < 0);
      }
      CHECK(window == gram);
    }
  }
}
