#include "oracles.hpp"
#include "pinchlab/catalog.hpp"
#include "pinchlab/curvature.hpp"

#include <doctest.h>

#include <numbers>

using namespace pinchlab;

namespace {

std::vector<CatalogImmersion> members() {
  return {make_umbilic_sphere(4, 2, 1.0),     make_umbilic_sphere(6, 3, 2.5),     make_sphere_product(2, 2, 1.0, 1.0),
          make_sphere_product(3, 3, 1.0, 1.0), make_sphere_product(2, 4, 0.7, 1.9), make_clifford_minimal(2, 2),
          make_clifford_minimal(3, 5)};
}

TheoremConstants constants(int n, double delta, double c, std::optional<double> c1 = std::nullopt) {
  TheoremConstants tc;
  tc.n = n;
  tc.delta = delta;
  tc.c_hat = c;
  tc.c1_hat = c1;
  return tc;
}

}  // namespace

TEST_CASE("Gauss equation reproduces the intrinsic curvature") {
  for (const auto& m : members()) {
    CAPTURE(m.name);
    CHECK((r_of(m.alpha) - intrinsic_curvature(m)).max_abs() <= 1e-10);
  }
}

TEST_CASE("trace identities on catalog members") {
  for (const auto& m : members()) {
    CAPTURE(m.name);
    const double n = m.n;
    const double H = m.mean_curvature();
    CHECK(std::abs(m.scal() - (m.alpha.trace().squaredNorm() - m.alpha.norm2())) <= 1e-10);
    CHECK(std::abs(m.scal() - (n * n * H * H - m.squared_norm())) <= 1e-10);
    const auto g = ScalarFormd::identity(m.n);
    CHECK((r_of(m.alpha) - (w_of(m.alpha) + kn_scalar(l_of(m.alpha), g))).max_abs() <= 1e-12);
  }
}

TEST_CASE("Poincare duality of stored Betti numbers") {
  for (const auto& m : members()) {
    CAPTURE(m.name);
    REQUIRE(m.betti.size() == static_cast<std::size_t>(m.n + 1));
    for (int i = 0; i <= m.n; ++i) CHECK(m.betti[i] == m.betti[m.n - i]);
  }
  CHECK(make_sphere_product(2, 2, 1, 1).betti == std::vector<int>{1, 0, 2, 0, 1});
  CHECK(make_sphere_product(2, 2, 1, 1).euler_characteristic() == 4);
  CHECK(make_sphere_product(3, 3, 1, 1).euler_characteristic() == 0);
}

TEST_CASE("umbilic sphere") {
  const auto m = make_umbilic_sphere(5, 2, 2.0);
  CHECK(curvature_deviation_norm(m.alpha) <= 1e-12);
  CHECK(w_of(m.alpha).max_abs() <= 1e-12);
  const double delta = 0.5;
  // S - delta n^2 H^2 = n (1 - delta n) / r^2
  CHECK(m.squared_norm() - delta * 25 * std::pow(m.mean_curvature(), 2) ==
        doctest::Approx(5 * (1 - delta * 5) / 4.0));
  CHECK(m.volume == doctest::Approx(sphere_volume(5) * 32));
}

TEST_CASE("sphere product S2 x S2") {
  const auto m = make_sphere_product(2, 2, 1.0, 1.0);
  CHECK(m.scal() == doctest::Approx(4.0));
  CHECK(m.volume == doctest::Approx(16 * std::numbers::pi * std::numbers::pi));
  const auto r = r_of(m.alpha);
  for (int i : {0, 1})
    for (int j : {2, 3}) CHECK(r(i, j, i, j) == 0.0);
  CHECK(r(0, 1, 0, 1) == doctest::Approx(1.0));
  const auto s = make_sphere_product(2, 3, 0.5, 2.0);
  CHECK(s.scal() == doctest::Approx(2 / 0.25 + 6 / 4.0));
}

TEST_CASE("Clifford members") {
  for (auto [p, q] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 5}}) {
    const auto m = make_clifford_minimal(p, q);
    const int n = p + q;
    CAPTURE(n);
    CHECK(std::abs(m.alpha.component(1).trace()) <= 1e-12);  // minimal in the sphere
    CHECK((m.alpha.component(0) - MatXd::Identity(n, n)).norm() <= 1e-12);
    CHECK(clifford_sphere_squared_norm(m) == doctest::Approx(n).epsilon(1e-12));
    CHECK(clifford_delta_threshold(m) == doctest::Approx(2.0 / n).epsilon(1e-12));
  }
  CHECK_THROWS_AS(make_clifford_minimal(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_sphere_product(1, 3, 1, 1), std::invalid_argument);
}

TEST_CASE("theorem checks on the umbilic sphere") {
  const auto m = make_umbilic_sphere(4, 2, 1.0);
  const auto rep = evaluate_theorem1(m, 0.6, constants(4, 0.6, 123.0));
  CHECK(rep.lhs == 0.0);
  CHECK(rep.betti_sum == 0);
  CHECK(rep.margin == 0.0);
  CHECK(rep.satisfied);
  CHECK(rep.applicability == Applicability::Applicable);
  CHECK(rep.nonpositive_scal_branch == Applicability::NotApplicable);

  const auto m6 = make_umbilic_sphere(6, 2, 1.0);
  const auto r5 = evaluate_theorem5(m6, 0.6, constants(6, 0.6, 1.0, 7.0));
  CHECK(r5.band_lo == 3);
  CHECK(r5.band_hi == 3);
  CHECK(r5.curvature_norm_integral <= 1e-20);
  CHECK(r5.betti_sum == 0);
  CHECK(r5.satisfied);
}

TEST_CASE("theorem1 check on S2 x S2") {
  const auto m = make_sphere_product(2, 2, 1.0, 1.0);
  const auto rep = evaluate_theorem1(m, 0.6, constants(4, 0.6, 10.0));
  CHECK(rep.betti_sum == 2);
  CHECK(rep.rhs == doctest::Approx(20.0));
  // |R - (scal/12) R_1|^2: R has 8 nonzero entries of +-1 in-factor; subtract 1/3 R_1.
  const auto g = ScalarFormd::identity(4);
  const double dev = (r_of(m.alpha) - (1.0 / 3.0) * (0.5 * kn_scalar(g, g))).norm();
  CHECK(rep.curvature_norm_integral == doctest::Approx(dev * dev * m.volume).epsilon(1e-12));
  CHECK(rep.pinch_integral == 0.0);  // S = 4 < 0.6 * 16 * 1/2
  CHECK(rep.satisfied);
  const auto bad = evaluate_theorem1(m, 0.6, constants(4, 0.6, 1e6));
  CHECK_FALSE(bad.satisfied);
  REQUIRE(bad.candidate);
  CHECK(bad.candidate->component(0) == m.alpha.component(0));
}

TEST_CASE("missing constants are reported, not guessed") {
  const auto m = make_sphere_product(3, 3, 1.0, 1.0);
  TheoremConstants tc;
  tc.n = 6;
  tc.delta = 0.6;
  CHECK(evaluate_theorem1(m, 0.6, tc).applicability == Applicability::MissingConstant);
  CHECK(evaluate_theorem5(m, 0.6, tc).applicability == Applicability::MissingConstant);
  CHECK_THROWS_AS(sphere_recognition_bound(tc), std::invalid_argument);
  CHECK(sphere_recognition_bound(constants(6, 0.6, 2.0)) == 6.0);
}

TEST_CASE("theorem5 check on S3 x S3") {
  const auto m = make_sphere_product(3, 3, 1.0, 1.0);
  const auto rep = evaluate_theorem5(m, 0.6, constants(6, 0.6, 1.0, 1.0));
  CHECK(rep.band_lo == 3);
  CHECK(rep.betti_sum == 2);
  CHECK(rep.curvature_norm_integral == doctest::Approx(std::pow(w_of(m.alpha).norm(), 3) * m.volume));
  CHECK(rep.curvature_norm_integral > 0.0);
  CHECK(evaluate_theorem5(make_sphere_product(2, 2, 1, 1), 0.6, constants(4, 0.6, 1.0, 1.0)).applicability ==
        Applicability::HypothesisViolated);
}

TEST_CASE("Weyl integral is homothety invariant") {
  for (const auto& m : {make_sphere_product(3, 3, 1.0, 1.0), make_sphere_product(2, 4, 0.7, 1.9)}) {
    const double base = std::pow(weyl_norm(m.alpha), m.n / 2.0) * m.volume;
    for (double c : {0.5, 3.0}) {
      const auto s = scaled(m, c);
      CHECK(std::pow(weyl_norm(s.alpha), s.n / 2.0) * s.volume == doctest::Approx(base).epsilon(1e-9));
    }
  }
}

TEST_CASE("corollary for minimal members") {
  const auto m = make_clifford_minimal(2, 2);
  const auto rep = evaluate_corollary_minimal(m, 0.75, constants(4, 0.75, 1.0));
  CHECK(rep.applicability == Applicability::Applicable);
  CHECK(rep.betti_sum == 2);
  CHECK(rep.curvature_norm_integral > 0.0);
  CHECK(evaluate_corollary_minimal(m, 0.4, constants(4, 0.4, 1.0)).applicability ==
        Applicability::HypothesisViolated);
  CHECK_THROWS_AS(evaluate_corollary_minimal(make_sphere_product(2, 2, 1, 1), 0.75, constants(4, 0.75, 1.0)),
                  std::invalid_argument);
}
