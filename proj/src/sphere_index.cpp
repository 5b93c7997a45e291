#include "pinchlab/sphere_index.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace pinchlab {

std::string to_string(RegionKind r) {
  switch (r) {
    case RegionKind::PhiBand: return "phi";
    case RegionKind::OmegaBand: return "omega";
    case RegionKind::FullSphere: return "full";
    case RegionKind::LambdaAuto: return "lambda";
  }
  return "?";
}

RegionKind region_from_string(const std::string& s) {
  if (s == "phi") return RegionKind::PhiBand;
  if (s == "omega") return RegionKind::OmegaBand;
  if (s == "full") return RegionKind::FullSphere;
  if (s == "lambda") return RegionKind::LambdaAuto;
  throw std::invalid_argument("unknown region: " + s);
}

std::string to_string(QuadMethod m) {
  return m == QuadMethod::CircleComposite ? "circle-composite" : "sphere-montecarlo";
}

QuadMethod quad_method_from_string(const std::string& s) {
  if (s == "circle-composite") return QuadMethod::CircleComposite;
  if (s == "sphere-montecarlo") return QuadMethod::SphereMonteCarlo;
  throw std::invalid_argument("unknown quadrature method: " + s);
}

QuadratureSpec default_quadrature(int k, int nodes, std::uint64_t seed) {
  return {k == 2 ? QuadMethod::CircleComposite : QuadMethod::SphereMonteCarlo, nodes, seed};
}

void validate(const QuadratureSpec& q, int k) {
  require(q.nodes >= 16, "quadrature: need at least 16 nodes");
  require(q.method != QuadMethod::CircleComposite || k == 2, "quadrature: circle-composite requires k = 2");
  require(k >= 1, "quadrature: k must be positive");
}

double sphere_volume(int m) {
  const double h = 0.5 * (m + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

ScalarFormd shape_operator(const VectorFormd& beta, const VecXd& u) {
  require(u.size() == beta.k(), "shape_operator: direction dimension mismatch");
  MatXd s = MatXd::Zero(beta.n(), beta.n());
  for (int a = 0; a < beta.k(); ++a) s += u(a) * beta.component(a);
  return ScalarFormd(s);
}

namespace {

struct Spectrum {
  int index = 0;
  double absdet = 0.0;
};

// Householder tridiagonalization, then a Sturm count for the index and the
// continuant recurrence for the determinant.
Spectrum spectrum(const VectorFormd& beta, const VecXd& u, double cut) {
  const MatXd a = shape_operator(beta, u).matrix();
  const int n = static_cast<int>(a.rows());
  Spectrum s{0, 1.0};
  if (n == 1) {
    s.index = a(0, 0) < -cut ? 1 : 0;
    s.absdet = std::abs(a(0, 0));
    return s;
  }
  Eigen::Tridiagonalization<MatXd> tri(a);
  const VecXd d = tri.diagonal();
  const VecXd e = tri.subDiagonal();
  const double pivmin = std::max(std::numeric_limits<double>::min(),
                                 std::numeric_limits<double>::epsilon() * std::max(1.0, a.cwiseAbs().maxCoeff()) *
                                     std::numeric_limits<double>::epsilon());
  double q = d(0) + cut;
  for (int i = 0;; ++i) {
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0) ++s.index;
    if (i + 1 == n) break;
    q = d(i + 1) + cut - e(i) * e(i) / q;
  }
  double fm2 = 1.0, fm1 = d(0);
  for (int i = 1; i < n; ++i) {
    const double f = d(i) * fm1 - e(i - 1) * e(i - 1) * fm2;
    fm2 = fm1;
    fm1 = f;
  }
  s.absdet = std::abs(fm1);
  return s;
}

double scal_fast(const VectorFormd& beta) { return beta.trace().squaredNorm() - beta.norm2(); }

}  // namespace

int index_of(const VectorFormd& beta, const VecXd& u, double tau) {
  return spectrum(beta, u, tau * beta.norm()).index;
}

bool in_region(RegionKind region, int index, int n, int k, double scal) {
  switch (region) {
    case RegionKind::PhiBand: return k <= index && index <= n - k;
    case RegionKind::OmegaBand: return k < index && index < n - k;
    case RegionKind::FullSphere: return true;
    case RegionKind::LambdaAuto: return scal > 0 ? (k <= index && index <= n - k) : true;
  }
  return false;
}

IndexProfile classify(const VectorFormd& beta, const VecXd& u, double tau) {
  const auto s = spectrum(beta, u, tau * beta.norm());
  IndexProfile p{u, s.index, s.absdet, {}};
  const double scal = scal_fast(beta);
  for (auto r : {RegionKind::PhiBand, RegionKind::OmegaBand, RegionKind::FullSphere, RegionKind::LambdaAuto})
    if (in_region(r, s.index, beta.n(), beta.k(), scal)) p.membership.insert(r);
  return p;
}

SphereNodes make_nodes(int k, const QuadratureSpec& q) {
  validate(q, k);
  SphereNodes out;
  out.u.reserve(q.nodes);
  if (q.method == QuadMethod::CircleComposite) {
    const double h = 2.0 * std::numbers::pi / q.nodes;
    for (int j = 0; j < q.nodes; ++j) {
      const double t = (j + 0.5) * h;
      VecXd u(2);
      u << std::cos(t), std::sin(t);
      out.u.push_back(u);
    }
    out.weight = h;
  } else {
    std::mt19937_64 rng(q.seed);
    std::normal_distribution<double> gauss;
    while (static_cast<int>(out.u.size()) < q.nodes) {
      VecXd u(k);
      for (int a = 0; a < k; ++a) u(a) = gauss(rng);
      const double nn = u.norm();
      if (nn == 0.0) continue;
      out.u.push_back(u / nn);
    }
    out.weight = sphere_volume(k - 1) / q.nodes;
  }
  return out;
}

Estimate psi_integral(const VectorFormd& beta, RegionKind region, const QuadratureSpec& q, double tau) {
  const auto nodes = make_nodes(beta.k(), q);
  const double cut = tau * beta.norm();
  const double scal = scal_fast(beta);
  const int n = beta.n(), k = beta.k();

  // Values reduced in node order so the result is independent of scheduling.
  std::vector<double> f(nodes.u.size(), 0.0);
  for (std::size_t j = 0; j < nodes.u.size(); ++j) {
    const auto s = spectrum(beta, nodes.u[j], cut);
    if (in_region(region, s.index, n, k, scal)) f[j] = s.absdet;
  }

  Estimate e;
  if (q.method == QuadMethod::CircleComposite) {
    // Even and odd nodes each form a shifted midpoint rule of half the size.
    double even = 0.0, odd = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) (j % 2 ? odd : even) += f[j];
    e.value = (even + odd) * nodes.weight;
    e.error = std::abs(even - odd) * nodes.weight;
  } else {
    double sum = 0.0, sum2 = 0.0;
    for (double v : f) {
      sum += v;
      sum2 += v * v;
    }
    const double N = static_cast<double>(f.size());
    const double mean = sum / N;
    const double var = std::max(0.0, (sum2 / N - mean * mean) * N / (N - 1));
    const double vol = sphere_volume(k - 1);
    e.value = vol * mean;
    e.error = vol * std::sqrt(var / N);
  }
  return e;
}

double psi_homogeneity_check(const VectorFormd& beta, double c, RegionKind region, const QuadratureSpec& q) {
  require(c > 0, "psi_homogeneity_check: c must be positive");
  const double base = psi_integral(beta, region, q).value;
  const double scaled = psi_integral(c * beta, region, q).value;
  const double expect = std::pow(c, beta.n()) * base;
  const double denom = std::max(std::abs(expect), std::numeric_limits<double>::min());
  if (base == 0.0 && scaled == 0.0) return 0.0;
  return std::abs(scaled - expect) / denom;
}

}  // namespace pinchlab
