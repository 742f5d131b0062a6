#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bellnoise/density_matrix.hpp"
#include "bellnoise/rng.hpp"

using namespace bellnoise;

namespace {

// Random full-rank state: A A^dagger normalized.
DensityMatrix random_state(SplitMix64& g) {
  Eigen::Matrix4cd a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      a(i, j) = {2.0 * g.uniform() - 1.0, 2.0 * g.uniform() - 1.0};
  Eigen::Matrix4cd m = a * a.adjoint();
  return DensityMatrix(m / m.trace());
}

}  // namespace

TEST_CASE("construction validates") {
  CHECK_THROWS_AS(DensityMatrix(Eigen::Matrix4cd::Identity()),
                  std::invalid_argument);  // trace 4
  Eigen::Matrix4cd nh = 0.25 * Eigen::Matrix4cd::Identity();
  nh(0, 1) = {0.0, 0.3};  // not Hermitian
  CHECK_THROWS_AS(DensityMatrix{nh}, std::invalid_argument);
  Eigen::Matrix4cd neg = Eigen::Matrix4cd::Zero();
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, std::invalid_argument);
}

TEST_CASE("singlet state") {
  const DensityMatrix s = singlet_state();
  CHECK(s.matrix().trace().real() == doctest::Approx(1.0));
  CHECK(s.purity() == doctest::Approx(1.0));
  const auto p = born_probabilities(s, 0.7, 0.7);
  CHECK(p.p_uu == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p.p_ud == doctest::Approx(0.5));
  CHECK(p.p_du == doctest::Approx(0.5));
  CHECK(p.p_dd == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("werner state spectrum") {
  CHECK((werner_state(1.0).matrix() - singlet_state().matrix())
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
  const auto mixed = werner_state(0.0).eigenvalues();
  for (int i = 0; i < 4; ++i) CHECK(mixed[i] == doctest::Approx(0.25));
  // Bell-basis diagonalization: (1+3V)/4 once, (1-V)/4 three times
  const double v = 0.5;
  const auto ev = werner_state(v).eigenvalues();
  CHECK(ev[3] == doctest::Approx((1.0 + 3.0 * v) / 4.0));  // 5/8
  for (int i = 0; i < 3; ++i)
    CHECK(ev[i] == doctest::Approx((1.0 - v) / 4.0));  // 1/8
  CHECK_THROWS_AS(werner_state(1.5), std::domain_error);
  CHECK_THROWS_AS(werner_state(-0.1), std::domain_error);
}

TEST_CASE("born probabilities reproduce the quantum model") {
  const DensityMatrix s = singlet_state();
  SplitMix64 g(5);
  for (int i = 0; i < 100; ++i) {
    const double a = 4.0 * pi * g.uniform() - 2.0 * pi;
    const double b = 4.0 * pi * g.uniform() - 2.0 * pi;
    const auto born = born_probabilities(s, a, b);
    const auto model = quantum_joint(a, b, SpinConvention::half);
    CHECK((born.as_vector() - model.as_vector()).cwiseAbs().maxCoeff() <=
          1e-12);
  }
}

TEST_CASE("born probabilities of maximally mixed and werner states") {
  const DensityMatrix mixed = werner_state(0.0);
  const auto u = born_probabilities(mixed, 1.0, 2.0);
  CHECK(u.p_uu == doctest::Approx(0.25));
  CHECK(u.p_dd == doctest::Approx(0.25));

  const double v = 0.35;
  const auto w = born_probabilities(werner_state(v), 0.2, 1.4);
  const auto q = quantum_joint(0.2, 1.4, SpinConvention::half);
  CHECK(w.p_uu == doctest::Approx(v * q.p_uu + (1.0 - v) * 0.25));
  CHECK(w.p_ud == doctest::Approx(v * q.p_ud + (1.0 - v) * 0.25));
}

TEST_CASE("partial transpose") {
  const Eigen::Matrix4cd mixed = 0.25 * Eigen::Matrix4cd::Identity();
  CHECK((partial_transpose(mixed) - mixed).cwiseAbs().maxCoeff() == 0.0);

  CHECK(pt_min_eigenvalue(singlet_state()) == doctest::Approx(-0.5));

  SplitMix64 g(9);
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix rho = random_state(g);
    const Eigen::Matrix4cd pt = partial_transpose(rho.matrix());
    // involution, trace and Hermiticity preserved
    CHECK((partial_transpose(pt) - rho.matrix()).cwiseAbs().maxCoeff() <=
          1e-12);
    CHECK(std::abs(pt.trace().real() - 1.0) <= 1e-12);
    CHECK((pt - pt.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("partial transpose of product states stays positive") {
  SplitMix64 g(21);
  for (int i = 0; i < 20; ++i) {
    Eigen::Matrix2cd a, b;
    for (auto* m : {&a, &b}) {
      Eigen::Matrix2cd r;
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          r(x, y) = {2.0 * g.uniform() - 1.0, 2.0 * g.uniform() - 1.0};
      *m = r * r.adjoint();
      *m /= m->trace();
    }
    Eigen::Matrix4cd prod;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        prod.block<2, 2>(2 * x, 2 * y) = a(x, y) * b;
    CHECK(pt_min_eigenvalue(DensityMatrix(prod)) >= -1e-12);
  }
}

TEST_CASE("separability verdicts") {
  CHECK_FALSE(is_separable_2x2(singlet_state()));
  CHECK(is_separable_2x2(werner_state(0.0)));
  CHECK_FALSE(is_separable_2x2(werner_state(0.5)));
  CHECK(is_separable_2x2(werner_state(0.3)));
}

TEST_CASE("werner separability threshold") {
  // analytic oracle: PT min eigenvalue of werner(V) is (1-3V)/4
  SplitMix64 g(31);
  for (int i = 0; i < 50; ++i) {
    const double v = g.uniform();
    CHECK(pt_min_eigenvalue(werner_state(v)) ==
          doctest::Approx((1.0 - 3.0 * v) / 4.0).epsilon(1e-10));
  }
  CHECK(werner_separability_threshold(1e-6) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(werner_separability_threshold(1e-2) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-2));
  // a family that is separable everywhere returns the upper bound
  const double all_sep = separability_threshold(
      [](double) { return werner_state(0.0); }, 1e-6);
  CHECK(all_sep == doctest::Approx(1.0));
}

TEST_CASE("werner separability is monotone in V") {
  bool seen_entangled = false;
  for (int i = 0; i < 1000; ++i) {
    const double v = i / 999.0;
    const bool sep = is_separable_2x2(werner_state(v));
    if (!sep) seen_entangled = true;
    CHECK_FALSE((seen_entangled && sep));  // no re-entrant behavior
  }
  CHECK(seen_entangled);
}

TEST_CASE("correlation tensor gives E(a,b)") {
  SplitMix64 g(41);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix rho = random_state(g);
    const Eigen::Matrix2d t = correlation_tensor_xz(rho);
    const double a = 2.0 * pi * g.uniform(), b = 2.0 * pi * g.uniform();
    const Eigen::Vector2d ua(std::sin(a), std::cos(a));
    const Eigen::Vector2d ub(std::sin(b), std::cos(b));
    CHECK(ua.dot(t * ub) ==
          doctest::Approx(correlation(born_probabilities(rho, a, b)))
              .epsilon(1e-10));
  }
}
