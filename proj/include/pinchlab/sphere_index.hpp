#pragma once

// Shape operators beta#(u), Morse-index bands of directions u on the unit
// sphere of W, and quadrature of |det beta#(u)| over those bands.

#include "pinchlab/forms.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pinchlab {

enum class RegionKind { PhiBand, OmegaBand, FullSphere, LambdaAuto };

std::string to_string(RegionKind r);
RegionKind region_from_string(const std::string& s);

enum class QuadMethod { CircleComposite, SphereMonteCarlo };

std::string to_string(QuadMethod m);
QuadMethod quad_method_from_string(const std::string& s);

struct QuadratureSpec {
  QuadMethod method = QuadMethod::CircleComposite;
  int nodes = 1024;
  std::uint64_t seed = 1;

  friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;
};

/// Circle rule for k = 2, Monte Carlo otherwise.
QuadratureSpec default_quadrature(int k, int nodes = 1024, std::uint64_t seed = 1);

/// Throws std::invalid_argument when this quadrature cannot be used for this k.
void validate(const QuadratureSpec& q, int k);

/// Membership bitmask over RegionKind values.
struct RegionSet {
  unsigned bits = 0;
  bool contains(RegionKind r) const { return (bits >> static_cast<unsigned>(r)) & 1U; }
  void insert(RegionKind r) { bits |= 1U << static_cast<unsigned>(r); }
};

struct IndexProfile {
  VecXd u;
  int index = 0;
  double detvalue = 0.0;
  RegionSet membership;
};

/// Value with an error estimate (quadrature or Monte Carlo standard error).
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Dead-band for the index count, relative to |beta|.
inline constexpr double kIndexTau = 1e-9;

/// beta#(u) = sum_a u_a beta_a.
ScalarFormd shape_operator(const VectorFormd& beta, const VecXd& u);

/// Number of eigenvalues of beta#(u) below -tau |beta|.
int index_of(const VectorFormd& beta, const VecXd& u, double tau = kIndexTau);

/// Phi: k <= index <= n-k. Omega: k < index < n-k. LambdaAuto follows Phi when
/// scal(beta) > 0 and the full sphere otherwise.
IndexProfile classify(const VectorFormd& beta, const VecXd& u, double tau = kIndexTau);

bool in_region(RegionKind region, int index, int n, int k, double scal);

/// Integral of |det beta#(u)| over the directions of `region`.
Estimate psi_integral(const VectorFormd& beta, RegionKind region, const QuadratureSpec& q,
                      double tau = kIndexTau);

/// |psi(c beta) - c^n psi(beta)| / max(c^n psi(beta), eps) with shared nodes.
double psi_homogeneity_check(const VectorFormd& beta, double c, RegionKind region, const QuadratureSpec& q);

/// Quadrature nodes on S^{k-1} and their weights (weights sum to Vol(S^{k-1})).
struct SphereNodes {
  std::vector<VecXd> u;
  double weight = 0.0;
};
SphereNodes make_nodes(int k, const QuadratureSpec& q);

/// 2 pi^{(m+1)/2} / Gamma((m+1)/2)
double sphere_volume(int m);

}  // namespace pinchlab
