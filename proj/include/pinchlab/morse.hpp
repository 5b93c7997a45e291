#pragma once

// Height-function Morse data of catalog members and Monte Carlo estimates of
// the total curvatures tau_i(f) and tau(f).

#include "pinchlab/catalog.hpp"
#include "pinchlab/sphere_index.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pinchlab {

struct CriticalPoint {
  std::string label;
  int index = 0;
};

struct CriticalSet {
  VecXd u;
  std::vector<CriticalPoint> points;
  bool degenerate = false;
};

/// Directions closer than this (in the relevant block norms) to the
/// non-generic set count as degenerate.
inline constexpr double kDegenerateTol = 1e-7;

/// Critical points of h_u(p) = <f(p), u>, u a unit vector of R^{n+k}.
/// Ambient layout: umbilic sphere uses R^{n+1} x R^{k-1}; products use
/// R^{p+1} x R^{q+1}.
CriticalSet critical_points(const CatalogImmersion& m, const VecXd& u);

/// mu_0 .. mu_n; all zeros for degenerate u.
std::vector<int> mu_counts(const CatalogImmersion& m, const VecXd& u);

struct TotalCurvature {
  std::vector<double> per_index;
  std::vector<double> per_index_stderr;
  double total = 0.0;
  double stderr_total = 0.0;
  long resampled = 0;
};

/// tau_i = average of mu_i over uniform u in S^{n+k-1}.
Estimate tau_index(const CatalogImmersion& m, int i, long samples, std::uint64_t seed);

/// All tau_i from one sample stream, plus their sum.
TotalCurvature tau_all(const CatalogImmersion& m, long samples, std::uint64_t seed);

/// tau(f) = (1/Vol(S^{n+k-1})) int_{UN_f} |det A_xi|, sampled over the unit
/// normal sphere at one point (homogeneity).
Estimate tau_total(const CatalogImmersion& m, long samples, std::uint64_t seed);

struct ShiohamaXu {
  Estimate lhs;  // int over {Index A_xi = i} of |det A_xi|
  Estimate rhs;  // Vol(S^{n+k-1}) tau_i
  double relative_error = 0.0;
};

ShiohamaXu shiohama_xu_check(const CatalogImmersion& m, int i, long samples, std::uint64_t seed);

}  // namespace pinchlab
