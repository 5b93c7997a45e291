#pragma once

// Curvature-type maps on W-valued symmetric forms: R, Ric, scal, L (Schouten
// part) and W (Weyl part), the two pinching functionals, and the recovery of
// the umbilic / conformally-flat structure of a form.

#include "pinchlab/forms.hpp"

#include <random>

namespace pinchlab {

/// R(beta) = 1/2 beta KN beta.
template <typename Scalar>
QuadTensor<Scalar> r_of(const VectorForm<Scalar>& beta) {
  return Scalar(0.5) * kn_vector(beta, beta);
}

/// Ric(x, y) = trace R(., x, ., y).
template <typename Scalar>
ScalarForm<Scalar> ricci_contraction(const QuadTensor<Scalar>& r) {
  const int n = r.n();
  Mat<Scalar> ric = Mat<Scalar>::Zero(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int i = 0; i < n; ++i) ric(x, y) += r(i, x, i, y);
  return ScalarForm<Scalar>(ric);
}

template <typename Scalar>
ScalarForm<Scalar> ric_of(const VectorForm<Scalar>& beta) {
  return ricci_contraction(r_of(beta));
}

template <typename Scalar>
Scalar scal_of(const VectorForm<Scalar>& beta) {
  return ric_of(beta).trace();
}

namespace detail {

template <typename Scalar>
ScalarForm<Scalar> schouten(const ScalarForm<Scalar>& ric, int n) {
  const Scalar scal = ric.trace();
  return ScalarForm<Scalar>(
      (ric.matrix() - scal / (Scalar(2) * (n - 1)) * Mat<Scalar>::Identity(n, n)) / Scalar(n - 2));
}

}  // namespace detail

/// L(beta) = (Ric - scal / (2(n-1)) g) / (n - 2).
template <typename Scalar>
ScalarForm<Scalar> l_of(const VectorForm<Scalar>& beta) {
  require(beta.n() >= 3, "l_of: requires n >= 3");
  return detail::schouten(ric_of(beta), beta.n());
}

/// W(beta) = R(beta) - L(beta) KN g.
template <typename Scalar>
QuadTensor<Scalar> w_of(const VectorForm<Scalar>& beta) {
  require(beta.n() >= 4, "w_of: requires n >= 4");
  auto r = r_of(beta);
  const auto l = detail::schouten(ricci_contraction(r), beta.n());
  return r - kn_scalar(l, ScalarForm<Scalar>::identity(beta.n()));
}

/// (|beta|^2 - lambda |trace beta|^2)_+
template <typename Scalar>
Scalar pinch_deficit(const VectorForm<Scalar>& beta, Scalar lambda) {
  require(lambda > Scalar(0) && lambda < Scalar(1), "pinch_deficit: lambda must lie in (0, 1)");
  return std::max(beta.norm2() - lambda * beta.trace().squaredNorm(), Scalar(0));
}

/// 1/4 |beta KN beta - scal/(n(n-1)) g KN g|^2 + deficit^2.
template <typename Scalar>
Scalar phi_pinch(const VectorForm<Scalar>& beta, Scalar lambda) {
  const int n = beta.n();
  require(lambda > Scalar(1) / n && lambda < Scalar(1), "phi_pinch: lambda must lie in (1/n, 1)");
  auto t = kn_vector(beta, beta);
  // scal(beta) = |trace beta|^2 - |beta|^2
  const Scalar scal = beta.trace().squaredNorm() - beta.norm2();
  const Scalar c = scal / (Scalar(n) * (n - 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      t(i, j, i, j) -= Scalar(2) * c;
      t(i, j, j, i) += Scalar(2) * c;
    }
  const Scalar d = pinch_deficit(beta, lambda);
  return t.norm2() / Scalar(4) + d * d;
}

/// |W(beta)|^2 + deficit^2.
template <typename Scalar>
Scalar phi_weyl(const VectorForm<Scalar>& beta, Scalar lambda) {
  const int n = beta.n();
  require(lambda > Scalar(1) / n && lambda < Scalar(1), "phi_weyl: lambda must lie in (1/n, 1)");
  const Scalar d = pinch_deficit(beta, lambda);
  return w_of(beta).norm2() + d * d;
}

// ---------------------------------------------------------------------------
// Structure recovery

template <typename Scalar>
struct UmbilicDecomposition {
  Vec<Scalar> xi;  // unit
  Scalar mu = Scalar(0);
  Subspace<Scalar> v1;
  Scalar residual = Scalar(0);
  bool success = false;
};

template <typename Scalar>
struct ConformalDecomposition {
  Vec<Scalar> xi;
  Subspace<Scalar> v1;
  Scalar residual = Scalar(0);
  bool success = false;
};

namespace detail {

// beta - s <.,.> xi
template <typename Scalar>
VectorForm<Scalar> remove_umbilic(const VectorForm<Scalar>& beta, const Vec<Scalar>& xi, Scalar s) {
  return beta - VectorForm<Scalar>::umbilic(beta.n(), xi, s);
}

// Sum of the m smallest eigenvalues of sum_a (beta_a - s xi_a I)^2, i.e. the
// squared distance of the best m-dimensional candidate for V1.
template <typename Scalar>
Scalar structure_gap(const VectorForm<Scalar>& beta, const Vec<Scalar>& xi, Scalar s, int m) {
  const int n = beta.n();
  Mat<Scalar> gram = Mat<Scalar>::Zero(n, n);
  for (int a = 0; a < beta.k(); ++a) {
    Mat<Scalar> d = beta.component(a);
    d.diagonal().array() -= s * xi(a);
    gram.noalias() += d * d;
  }
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(gram, Eigen::EigenvaluesOnly);
  return es.eigenvalues().head(m).sum();
}

// One alternating step: best m-dimensional V1 for the current xi, then the
// least-squares xi for that V1.
template <typename Scalar>
Vec<Scalar> refine_structure(const VectorForm<Scalar>& beta, const Vec<Scalar>& xi, Scalar s, int m) {
  const int n = beta.n();
  Mat<Scalar> gram = Mat<Scalar>::Zero(n, n);
  for (int a = 0; a < beta.k(); ++a) {
    Mat<Scalar> d = beta.component(a);
    d.diagonal().array() -= s * xi(a);
    gram.noalias() += d * d;
  }
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(gram);
  const Mat<Scalar> q = es.eigenvectors().leftCols(m);
  Vec<Scalar> out(beta.k());
  for (int a = 0; a < beta.k(); ++a) out(a) = (q.transpose() * beta.component(a) * q).trace() / (s * m);
  return out;
}

template <typename Scalar>
Scalar structure_residual(const VectorForm<Scalar>& beta, const Vec<Scalar>& xi, Scalar s,
                          const Subspace<Scalar>& v1) {
  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> gauss;
  const auto diff = remove_umbilic(beta, xi, s);
  Scalar worst(0);
  for (int t = 0; t < 50; ++t) {
    Vec<Scalar> y(beta.n());
    for (int i = 0; i < beta.n(); ++i) y(i) = Scalar(gauss(rng));
    y.normalize();
    for (int c = 0; c < v1.dim(); ++c) worst = std::max(worst, diff(Vec<Scalar>(v1.basis.col(c)), y).norm());
  }
  return worst;
}

template <typename Scalar>
Vec<Scalar> search_structure(const VectorForm<Scalar>& beta, const std::vector<Vec<Scalar>>& candidates,
                             Scalar s, int m, bool unit) {
  std::vector<std::pair<Scalar, std::size_t>> scored;
  scored.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    scored.emplace_back(structure_gap(beta, candidates[i], s, m), i);
  const std::size_t keep = std::min<std::size_t>(3, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + keep, scored.end());

  Vec<Scalar> best;
  Scalar best_gap = std::numeric_limits<Scalar>::infinity();
  for (std::size_t r = 0; r < keep; ++r) {
    Vec<Scalar> xi = candidates[scored[r].second];
    Scalar gap = scored[r].first;
    for (int it = 0; it < 100; ++it) {
      Vec<Scalar> next = refine_structure(beta, xi, s, m);
      if (unit) {
        const Scalar nn = next.norm();
        if (nn == Scalar(0)) break;
        next /= nn;
      }
      const Scalar g = structure_gap(beta, next, s, m);
      if (!(g < gap)) break;
      const Scalar step = (next - xi).norm();
      xi = next;
      gap = g;
      if (step <= std::numeric_limits<Scalar>::epsilon()) break;
    }
    if (gap < best_gap) {
      best_gap = gap;
      best = xi;
    }
  }
  return best;
}

}  // namespace detail

/// Finds a unit xi and the largest V1 with beta(x, y) = sqrt(mu) <x, y> xi for
/// x in V1, where mu = scal(beta) / (n(n-1)). Meant for beta KN beta = mu g KN g.
template <typename Scalar>
UmbilicDecomposition<Scalar> decompose_umbilic(const VectorForm<Scalar>& beta, Scalar tol = Scalar(1e-9)) {
  const int n = beta.n(), k = beta.k();
  UmbilicDecomposition<Scalar> out;
  out.mu = scal_of(beta) / (Scalar(n) * (n - 1));
  out.xi = Vec<Scalar>::Zero(k);
  out.v1 = Subspace<Scalar>{Mat<Scalar>(n, 0), tol};
  if (out.mu <= tol) {
    out.residual = std::numeric_limits<Scalar>::infinity();
    return out;
  }
  const Scalar root = std::sqrt(out.mu);
  const int m = std::max(1, n - k + 1);

  std::mt19937_64 rng(0x51ce5eedULL);
  std::normal_distribution<double> gauss;
  std::vector<Vec<Scalar>> cand;
  for (int i = 0; i < 2000 * k; ++i) {
    Vec<Scalar> u(k);
    for (int a = 0; a < k; ++a) u(a) = Scalar(gauss(rng));
    cand.push_back(u.normalized());
  }
  out.xi = detail::search_structure(beta, cand, root, m, true);
  out.v1 = small_singular_space(detail::remove_umbilic(beta, out.xi, root),
                                tol * std::max(Scalar(1), root), tol);
  out.residual = detail::structure_residual(beta, out.xi, root, out.v1);
  out.success = out.v1.dim() >= n - k + 1 && out.residual <= Scalar(10) * tol * beta.norm();
  return out;
}

/// Finds xi (not necessarily unit) and the largest V1 with
/// beta(x, y) = <x, y> xi for x in V1. Meant for W(beta) = 0, k < n - 2.
template <typename Scalar>
ConformalDecomposition<Scalar> decompose_conformally_flat(const VectorForm<Scalar>& beta,
                                                          Scalar tol = Scalar(1e-9)) {
  const int n = beta.n(), k = beta.k();
  ConformalDecomposition<Scalar> out;
  const int m = std::max(1, n - k);

  std::mt19937_64 rng(0xc0f1a7ULL);
  std::normal_distribution<double> gauss;
  std::vector<Vec<Scalar>> cand;
  for (int i = 0; i < 2000 * k; ++i) {
    Vec<Scalar> x(n);
    for (int j = 0; j < n; ++j) x(j) = Scalar(gauss(rng));
    x.normalize();
    cand.push_back(beta(x, x));
  }
  out.xi = detail::search_structure(beta, cand, Scalar(1), m, false);
  out.v1 = small_singular_space(detail::remove_umbilic(beta, out.xi, Scalar(1)),
                                tol * std::max(Scalar(1), out.xi.norm()), tol);
  out.residual = detail::structure_residual(beta, out.xi, Scalar(1), out.v1);
  out.success = out.v1.dim() >= n - k && out.residual <= Scalar(10) * tol * std::max(Scalar(1), beta.norm());
  return out;
}

}  // namespace pinchlab
