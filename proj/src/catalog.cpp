#include "pinchlab/catalog.hpp"

#include "pinchlab/curvature.hpp"

#include <cmath>

namespace pinchlab {

std::string to_string(Family f) {
  switch (f) {
    case Family::UmbilicSphere: return "umbilic-sphere";
    case Family::SphereProduct: return "sphere-product";
    case Family::CliffordMinimal: return "clifford-minimal";
  }
  return "?";
}

std::string to_string(Applicability a) {
  switch (a) {
    case Applicability::Applicable: return "applicable";
    case Applicability::NotApplicable: return "not-applicable";
    case Applicability::HypothesisViolated: return "hypothesis-violated";
    case Applicability::MissingConstant: return "missing-constant";
  }
  return "?";
}

double CatalogImmersion::scal() const { return scal_of(alpha); }

int CatalogImmersion::euler_characteristic() const {
  int chi = 0;
  for (std::size_t i = 0; i < betti.size(); ++i) chi += (i % 2 ? -1 : 1) * betti[i];
  return chi;
}

namespace {

MatXd block_identity(int n, int from, int count) {
  MatXd m = MatXd::Zero(n, n);
  m.block(from, from, count, count).setIdentity();
  return m;
}

CatalogImmersion product_shell(int p, int q, double r, double s) {
  CatalogImmersion m;
  m.n = p + q;
  m.k = 2;
  m.p = p;
  m.q = q;
  m.r = r;
  m.s = s;
  m.betti.assign(m.n + 1, 0);
  // Kunneth over F_2: H(S^p) x H(S^q)
  m.betti[0] += 1;
  m.betti[p] += 1;
  m.betti[q] += 1;
  m.betti[m.n] += 1;
  m.volume = sphere_volume(p) * std::pow(r, p) * sphere_volume(q) * std::pow(s, q);
  return m;
}

}  // namespace

CatalogImmersion make_umbilic_sphere(int n, int k, double r) {
  require(r > 0 && k >= 1 && n >= 2, "make_umbilic_sphere: need r > 0, k >= 1, n >= 2");
  CatalogImmersion m;
  m.name = "S^" + std::to_string(n) + "(" + std::to_string(r) + ") in R^" + std::to_string(n + k);
  m.family = Family::UmbilicSphere;
  m.n = n;
  m.k = k;
  m.p = n;
  m.r = r;
  m.betti.assign(n + 1, 0);
  m.betti[0] = m.betti[n] = 1;
  m.volume = sphere_volume(n) * std::pow(r, n);
  VecXd xi = VecXd::Zero(k);
  xi(0) = 1.0;
  m.alpha = VectorFormd::umbilic(n, xi, 1.0 / r);
  return m;
}

CatalogImmersion make_sphere_product(int p, int q, double r, double s) {
  require(p >= 2 && q >= 2, "make_sphere_product: both factors need dimension >= 2");
  require(r > 0 && s > 0, "make_sphere_product: radii must be positive");
  CatalogImmersion m = product_shell(p, q, r, s);
  m.family = Family::SphereProduct;
  m.name = "S^" + std::to_string(p) + "(" + std::to_string(r) + ") x S^" + std::to_string(q) + "(" +
           std::to_string(s) + ")";
  m.alpha = VectorFormd({block_identity(m.n, 0, p) / r, block_identity(m.n, p, q) / s});
  return m;
}

CatalogImmersion make_clifford_minimal(int p, int q) {
  require(p >= 2 && q >= 2, "make_clifford_minimal: both factors need dimension >= 2");
  const int n = p + q;
  const double r = std::sqrt(double(p) / n), s = std::sqrt(double(q) / n);
  CatalogImmersion m = product_shell(p, q, r, s);
  m.family = Family::CliffordMinimal;
  m.name = "Clifford S^" + std::to_string(p) + " x S^" + std::to_string(q) + " in S^" + std::to_string(n + 1);
  // Factor normals eta_1, eta_2 (inward). Position normal -x = r eta_1 + s eta_2,
  // normal inside the sphere nu = s eta_1 - r eta_2.
  const MatXd g1 = block_identity(n, 0, p) / r, g2 = block_identity(n, p, q) / s;
  m.alpha = VectorFormd({r * g1 + s * g2, s * g1 - r * g2});
  return m;
}

QuadTensord intrinsic_curvature(const CatalogImmersion& m) {
  const int n = m.n;
  QuadTensord t(n);
  // K (d_ik d_jl - d_il d_jk) within each constant-curvature block.
  auto block = [&](int from, int count, double curv) {
    for (int i = from; i < from + count; ++i)
      for (int j = from; j < from + count; ++j) {
        if (i == j) continue;
        t(i, j, i, j) += curv;
        t(i, j, j, i) -= curv;
      }
  };
  if (m.family == Family::UmbilicSphere) {
    block(0, n, 1.0 / (m.r * m.r));
  } else {
    block(0, m.p, 1.0 / (m.r * m.r));
    block(m.p, m.q, 1.0 / (m.s * m.s));
  }
  return t;
}

double clifford_sphere_squared_norm(const CatalogImmersion& m) { return m.alpha.component(1).squaredNorm(); }

double clifford_delta_threshold(const CatalogImmersion& m) {
  // S_sphere = n (delta n - 1)
  const double n = m.n;
  return (clifford_sphere_squared_norm(m) / n + 1.0) / n;
}

CatalogImmersion scaled(const CatalogImmersion& m, double c) {
  require(c > 0, "scaled: factor must be positive");
  switch (m.family) {
    case Family::UmbilicSphere: return make_umbilic_sphere(m.n, m.k, c * m.r);
    case Family::SphereProduct: return make_sphere_product(m.p, m.q, c * m.r, c * m.s);
    case Family::CliffordMinimal: {
      CatalogImmersion out = make_sphere_product(m.p, m.q, c * m.r, c * m.s);
      out.name = m.name + " scaled";
      return out;
    }
  }
  return m;
}

double sphere_recognition_bound(const TheoremConstants& c) {
  require(c.c_hat.has_value(), "sphere_recognition_bound: c(n, delta) missing");
  return 3.0 * *c.c_hat;
}

double curvature_deviation_norm(const VectorFormd& alpha) {
  const int n = alpha.n();
  QuadTensord r = r_of(alpha);
  const double c = scal_of(alpha) / (double(n) * (n - 1));
  // R_1 = 1/2 g KN g
  r -= c * (0.5 * kn_scalar(ScalarFormd::identity(n), ScalarFormd::identity(n)));
  return r.norm();
}

double weyl_norm(const VectorFormd& alpha) { return w_of(alpha).norm(); }

namespace {

int band_sum(const std::vector<int>& betti, int lo, int hi) {
  int s = 0;
  for (int i = std::max(lo, 0); i <= hi && i < static_cast<int>(betti.size()); ++i) s += betti[i];
  return s;
}

double pinch_term(const CatalogImmersion& m, double delta) {
  const double n = m.n;
  const double excess = m.squared_norm() - delta * n * n * std::pow(m.mean_curvature(), 2);
  return std::pow(std::max(excess, 0.0), n / 2.0) * m.volume;
}

void finish(InequalityReport& rep, const CatalogImmersion& m, std::optional<double> constant) {
  if (!constant) {
    rep.applicability = Applicability::MissingConstant;
    return;
  }
  rep.constant = *constant;
  rep.lhs = rep.curvature_norm_integral + rep.pinch_integral;
  rep.rhs = rep.constant * rep.betti_sum;
  rep.margin = rep.lhs - rep.rhs;
  const double tol = kReportTolerance * std::max(std::abs(rep.lhs), std::abs(rep.rhs));
  rep.satisfied = rep.lhs >= rep.rhs - tol;
  if (!rep.satisfied) rep.candidate = m.alpha;
  rep.nonpositive_scal_branch = m.scal() <= 0 ? Applicability::Applicable : Applicability::NotApplicable;
}

InequalityReport base_report(const CatalogImmersion& m, double delta, const char* check) {
  InequalityReport rep;
  rep.member = m.name;
  rep.check = check;
  rep.n = m.n;
  rep.k = m.k;
  rep.delta = delta;
  return rep;
}

}  // namespace

InequalityReport evaluate_theorem1(const CatalogImmersion& m, double delta, const TheoremConstants& c) {
  auto rep = base_report(m, delta, "theorem1");
  if (!admissible(m.n, m.k, Variant::Pinch) || !(delta > 1.0 / m.n && delta < 1.0)) {
    rep.applicability = Applicability::HypothesisViolated;
    return rep;
  }
  rep.band_lo = m.k;
  rep.band_hi = m.n - m.k;
  rep.betti_sum = band_sum(m.betti, rep.band_lo, rep.band_hi);
  rep.curvature_norm_integral = std::pow(curvature_deviation_norm(m.alpha), m.n / 2.0) * m.volume;
  rep.pinch_integral = pinch_term(m, delta);
  finish(rep, m, c.c_hat);
  return rep;
}

InequalityReport evaluate_theorem5(const CatalogImmersion& m, double delta, const TheoremConstants& c) {
  auto rep = base_report(m, delta, "theorem5");
  if (m.n < 6 || !admissible(m.n, m.k, Variant::Weyl) || !(delta > 1.0 / m.n && delta < 1.0)) {
    rep.applicability = Applicability::HypothesisViolated;
    return rep;
  }
  rep.band_lo = m.k + 1;
  rep.band_hi = m.n - m.k - 1;
  rep.betti_sum = band_sum(m.betti, rep.band_lo, rep.band_hi);
  rep.curvature_norm_integral = std::pow(weyl_norm(m.alpha), m.n / 2.0) * m.volume;
  rep.pinch_integral = pinch_term(m, delta);
  finish(rep, m, c.c1_hat);
  return rep;
}

InequalityReport evaluate_corollary_minimal(const CatalogImmersion& m, double delta, const TheoremConstants& c) {
  auto rep = base_report(m, delta, "corollary_minimal");
  require(m.family == Family::CliffordMinimal, "evaluate_corollary_minimal: member must be a Clifford member");
  const double n = m.n;
  const double s_sphere = clifford_sphere_squared_norm(m);
  if (!admissible(m.n, m.k, Variant::Pinch) || !(delta > 1.0 / n && delta < 1.0) ||
      s_sphere > n * (delta * n - 1.0) * (1.0 + 1e-12)) {
    rep.applicability = Applicability::HypothesisViolated;
    return rep;
  }
  rep.band_lo = m.k;
  rep.band_hi = m.n - m.k;
  rep.betti_sum = band_sum(m.betti, rep.band_lo, rep.band_hi);
  rep.curvature_norm_integral = std::pow(curvature_deviation_norm(m.alpha), n / 2.0) * m.volume;
  rep.pinch_integral = 0.0;
  finish(rep, m, c.c_hat);
  return rep;
}

}  // namespace pinchlab
