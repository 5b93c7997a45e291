#pragma once

// Homogeneous submanifolds of Euclidean space with closed-form second
// fundamental forms. Every pointwise quantity is constant on these members, so
// the integral inequalities reduce to (pointwise value) x volume.

#include "pinchlab/forms.hpp"
#include "pinchlab/pinch_constants.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pinchlab {

enum class Family { UmbilicSphere, SphereProduct, CliffordMinimal };

std::string to_string(Family f);

/// Frame conventions:
///  - umbilic sphere S^n(r) in R^{n+1} x R^{k-1}: xi_1 is the inward normal
///    inside R^{n+1}; alpha = (1/r) g xi_1.
///  - sphere product S^p(r) x S^q(s) in R^{p+1} x R^{q+1}: xi_1, xi_2 are the
///    inward factor normals; alpha = (1/r) g_1 xi_1 + (1/s) g_2 xi_2.
///  - Clifford member S^p(sqrt(p/n)) x S^q(sqrt(q/n)) in S^{n+1} in R^{n+2}:
///    xi_1 is the inward normal of the unit sphere (umbilic part, alpha_1 = g),
///    xi_2 the normal of M inside S^{n+1} (minimal part).
/// Tangent frames list the first factor before the second.
struct CatalogImmersion {
  std::string name;
  Family family = Family::UmbilicSphere;
  int n = 0;
  int k = 0;  // codimension in R^{n+k}
  int p = 0, q = 0;
  double r = 1.0, s = 1.0;
  std::vector<int> betti;  // over F_2, beta_0 .. beta_n
  double volume = 0.0;
  VectorFormd alpha;

  double squared_norm() const { return alpha.norm2(); }             // S
  double mean_curvature() const { return alpha.trace().norm() / n; }  // H
  double scal() const;
  int euler_characteristic() const;
};

CatalogImmersion make_umbilic_sphere(int n, int k, double r);
CatalogImmersion make_sphere_product(int p, int q, double r, double s);
CatalogImmersion make_clifford_minimal(int p, int q);

/// Curvature tensor of the intrinsic metric, coded from the space-form and
/// product-metric formulas (independent of the Gauss equation).
QuadTensord intrinsic_curvature(const CatalogImmersion& m);

/// Squared norm of the second fundamental form of the Clifford member inside
/// S^{n+1}, read off the xi_2 component.
double clifford_sphere_squared_norm(const CatalogImmersion& m);

/// 2/n: the smallest delta with S_sphere <= n(delta n - 1).
double clifford_delta_threshold(const CatalogImmersion& m);

/// Same member with every radius multiplied by c.
CatalogImmersion scaled(const CatalogImmersion& m, double c);

enum class Applicability { Applicable, NotApplicable, HypothesisViolated, MissingConstant };

std::string to_string(Applicability a);

struct InequalityReport {
  std::string member;
  std::string check;  // theorem1 | theorem5 | corollary_minimal
  int n = 0, k = 0;
  double delta = 0.0;
  double curvature_norm_integral = 0.0;
  double pinch_integral = 0.0;
  double constant = 0.0;
  int betti_sum = 0;
  int band_lo = 0, band_hi = -1;
  double lhs = 0.0, rhs = 0.0;
  bool satisfied = false;
  double margin = 0.0;
  Applicability applicability = Applicability::Applicable;
  /// "not applicable" when no member has scal <= 0.
  Applicability nonpositive_scal_branch = Applicability::NotApplicable;
  std::optional<VectorFormd> candidate;  // emitted when violated
};

/// Relative tolerance used for `satisfied`.
inline constexpr double kReportTolerance = 1e-6;

/// |R - scal/(n(n-1)) R_1|^{n/2} vol + (S - delta n^2 H^2)_+^{n/2} vol
/// >= c(n, delta) sum_{i=k}^{n-k} beta_i
InequalityReport evaluate_theorem1(const CatalogImmersion& m, double delta, const TheoremConstants& c);

/// |W|^{n/2} vol + (S - delta n^2 H^2)_+^{n/2} vol >= c1(n, delta) sum_{i=k+1}^{n-k-1} beta_i
InequalityReport evaluate_theorem5(const CatalogImmersion& m, double delta, const TheoremConstants& c);

/// Minimal member in a sphere with S_sphere <= n(delta n - 1):
/// |R - scal/(n(n-1)) R_1|^{n/2} vol >= c(n, delta) sum_{i=k}^{n-k} beta_i
InequalityReport evaluate_corollary_minimal(const CatalogImmersion& m, double delta, const TheoremConstants& c);

/// Pointwise |R - scal/(n(n-1)) R_1| and |W| from alpha.
double curvature_deviation_norm(const VectorFormd& alpha);
double weyl_norm(const VectorFormd& alpha);

/// Bound used by the sphere-recognition statement for scal <= 0: 3 c(n, delta).
double sphere_recognition_bound(const TheoremConstants& c);

}  // namespace pinchlab
