#include "oracles.hpp"
#include "pinchlab/curvature.hpp"

#include <doctest.h>

using namespace pinchlab;

namespace {

VectorFormd umbilic(int n, int k) {
  VecXd xi = VecXd::Zero(k);
  xi(0) = 1.0;
  return VectorFormd::umbilic(n, xi);
}

}  // namespace

TEST_CASE("kn_scalar of g with itself on an orthonormal pair") {
  const auto g = ScalarFormd::identity(5);
  const auto t = kn_scalar(g, g);
  CHECK(t(0, 1, 0, 1) == doctest::Approx(2.0));
  CHECK(t(0, 1, 1, 0) == doctest::Approx(-2.0));
  CHECK(t(0, 0, 1, 1) == 0.0);
}

TEST_CASE("kn_scalar with a zero factor vanishes") {
  CHECK(kn_scalar(ScalarFormd::identity(4), ScalarFormd::zero(4)).max_abs() == 0.0);
}

TEST_CASE("kn_scalar matches the loop oracle for diag(1,2,3,4) and g") {
  MatXd d = MatXd::Zero(4, 4);
  d.diagonal() << 1, 2, 3, 4;
  const auto t = kn_scalar(ScalarFormd(d), ScalarFormd::identity(4));
  CHECK(oracle::max_diff(t, oracle::kn_naive(d, MatXd::Identity(4, 4))) <= 1e-12);
}

TEST_CASE("kn_vector matches the loop oracle") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    const auto b = oracle::random_form(5, 2, rng), c = oracle::random_form(5, 2, rng);
    CHECK(oracle::max_diff(kn_vector(b, c), oracle::kn_naive(b, c)) <= 1e-12);
  }
}

TEST_CASE("umbilic KN square is g KN g") {
  const auto b = umbilic(6, 3);
  const auto g = ScalarFormd::identity(6);
  CHECK((kn_vector(b, b) - kn_scalar(g, g)).max_abs() <= 1e-12);
  CHECK(kn_vector(VectorFormd::zero({6, 3}), VectorFormd::zero({6, 3})).max_abs() == 0.0);
}

TEST_CASE("kn products are bilinear and symmetric") {
  std::mt19937_64 rng(11);
  const int n = 5;
  const ScalarFormd p(oracle::random_symmetric(n, rng)), q(oracle::random_symmetric(n, rng)),
      r(oracle::random_symmetric(n, rng));
  const double a = 0.7, b = -1.3;
  CHECK((kn_scalar(a * p + b * q, r) - (a * kn_scalar(p, r) + b * kn_scalar(q, r))).max_abs() <= 1e-12);
  CHECK((kn_scalar(p, q) - kn_scalar(q, p)).max_abs() == 0.0);

  const auto x = oracle::random_form(n, 3, rng), y = oracle::random_form(n, 3, rng),
             z = oracle::random_form(n, 3, rng);
  CHECK((kn_vector(a * x + b * y, z) - (a * kn_vector(x, z) + b * kn_vector(y, z))).max_abs() <= 1e-12);
  CHECK((kn_vector(z, a * x + b * y) - (a * kn_vector(z, x) + b * kn_vector(z, y))).max_abs() <= 1e-12);
  CHECK((kn_vector(x, y) - kn_vector(y, x)).max_abs() <= 1e-12);
}

TEST_CASE("constructed tensors carry curvature symmetries") {
  std::mt19937_64 rng(3);
  const auto b = oracle::random_form(6, 2, rng);
  CHECK(kn_vector(b, b).symmetry_defect() <= 1e-12);
  CHECK(w_of(b).symmetry_defect() <= 1e-12);
  CHECK(kn_scalar(ScalarFormd(oracle::random_symmetric(6, rng)), ScalarFormd(oracle::random_symmetric(6, rng)))
            .symmetry_defect() <= 1e-12);
}

TEST_CASE("forms are stored exactly symmetric") {
  MatXd m(3, 3);
  m << 1, 2, 3, 0, 1, 5, 1, 1, 1;
  const ScalarFormd s(m);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(s(i, j) == s(j, i));
  const VectorFormd v({m, m.transpose()});
  CHECK(v.norm2() == doctest::Approx(v.component(0).squaredNorm() + v.component(1).squaredNorm()));
}

TEST_CASE("dimension mismatches throw") {
  CHECK_THROWS_AS(kn_scalar(ScalarFormd::identity(3), ScalarFormd::identity(4)), std::invalid_argument);
  CHECK_THROWS_AS(kn_vector(VectorFormd::zero({4, 2}), VectorFormd::zero({4, 3})), std::invalid_argument);
  CHECK_THROWS_AS(lift_lorentz(VectorFormd::zero({4, 2}), ScalarFormd::identity(5)), std::invalid_argument);
}

TEST_CASE("is_flat") {
  const auto z = is_flat(VectorFormd::zero({5, 2}), 1e-9);
  CHECK(z.flat);
  CHECK(z.residual == 0.0);
  const auto u = is_flat(umbilic(5, 2), 1e-9);
  CHECK_FALSE(u.flat);
  CHECK(u.residual == doctest::Approx(2.0));

  std::mt19937_64 rng(5);
  const auto b = oracle::random_form(5, 3, rng);
  CHECK(is_flat(b, 1e-9).residual == kn_vector(b, b).max_abs());
}

TEST_CASE("Lorentz lift is flat exactly when the Weyl part vanishes") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 5; ++rep) {
    const auto p = oracle::planted_conformal(8, 2, rng);
    REQUIRE(w_of(p.beta).max_abs() <= 1e-10);
    const auto lift = lift_lorentz(p.beta, l_of(p.beta));
    CHECK(is_flat(lift, 1e-10).flat);
  }
  const auto u = umbilic(6, 2);
  CHECK(is_flat(lift_lorentz(u, l_of(u)), 1e-10).flat);

  // The lift squares to twice the Weyl tensor.
  const auto b = oracle::random_form(6, 2, rng);
  CHECK((lift_lorentz(b, l_of(b)).kn_square() - 2.0 * w_of(b)).max_abs() <= 1e-10);
  CHECK_FALSE(is_flat(lift_lorentz(b, l_of(b)), 1e-9).flat);
}

TEST_CASE("Lorentz lift of zero") {
  const auto lift = lift_lorentz(VectorFormd::zero({4, 2}), ScalarFormd::zero(4));
  int nonzero = 0;
  for (int a = 0; a < lift.dim(); ++a)
    if (lift.component(a).norm() > 0) {
      ++nonzero;
      CHECK(lift.component(a) == MatXd::Identity(4, 4));
    }
  CHECK(nonzero == 1);
}

TEST_CASE("LorentzSpace checks the signature") {
  CHECK_NOTHROW(LorentzSpace<double>::standard(3));
  CHECK_THROWS_AS(LorentzSpace<double>(MatXd::Identity(4, 4)), std::invalid_argument);
  MatXd two = MatXd::Identity(4, 4);
  two(0, 0) = two(1, 1) = -1;
  CHECK_THROWS_AS(LorentzSpace<double>{two}, std::invalid_argument);
  MatXd degenerate = MatXd::Identity(3, 3);
  degenerate(0, 0) = -1;
  degenerate(2, 2) = 0;
  CHECK_THROWS_AS(LorentzSpace<double>{degenerate}, std::invalid_argument);
}

TEST_CASE("nullity space") {
  CHECK(nullity_space(VectorFormd::zero({5, 2})).dim() == 5);
  CHECK(nullity_space(umbilic(5, 2)).dim() == 0);

  MatXd d = MatXd::Zero(5, 5);
  d(0, 0) = d(1, 1) = 1;
  const auto s = nullity_space(VectorFormd({d, MatXd::Zero(5, 5)}));
  REQUIRE(s.dim() == 3);
  MatXd expect = MatXd::Zero(5, 5);
  expect(2, 2) = expect(3, 3) = expect(4, 4) = 1;
  CHECK((s.projector() - expect).norm() <= 1e-12);
  CHECK((s.basis.transpose() * s.basis - MatXd::Identity(3, 3)).norm() <= 1e-12);
}

TEST_CASE("nullity vectors annihilate beta against random y") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  const int n = 7;
  // Components supported on the first four coordinates.
  std::vector<MatXd> c;
  for (int a = 0; a < 2; ++a) {
    MatXd m = MatXd::Zero(n, n);
    m.topLeftCorner(4, 4) = oracle::random_symmetric(4, rng);
    c.push_back(m);
  }
  const MatXd Q = oracle::random_orthogonal(n, rng);
  for (auto& m : c) m = Q * m * Q.transpose();
  const VectorFormd b(c);
  const double tol = 1e-9;
  const auto s = nullity_space(b, tol);
  CHECK(s.dim() == 3);
  for (int col = 0; col < s.dim(); ++col)
    for (int rep = 0; rep < 100; ++rep) {
      VecXd y(n);
      for (int i = 0; i < n; ++i) y(i) = g(rng);
      y.normalize();
      CHECK(b(s.basis.col(col), y).norm() <= tol * b.norm());
    }
}
