#include "pinchlab/morse.hpp"

#include <cmath>
#include <numbers>

namespace pinchlab {

namespace {

// Counter-based stream: sample j of seed s is reproducible on its own.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t counter)
      : state_(mix(seed ^ mix(counter + 0x9e3779b97f4a7c15ULL))) {}

  double uniform() {  // (0, 1)
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double gauss() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  VecXd unit(int dim) {
    VecXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = gauss();
    return v / v.norm();
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t next() { return mix(state_ += 0x9e3779b97f4a7c15ULL); }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

int ambient_dim(const CatalogImmersion& m) { return m.n + m.k; }

// Generic direction for sample j; directions near the exceptional set are
// redrawn from the same per-sample stream.
VecXd generic_direction(const CatalogImmersion& m, std::uint64_t seed, long j, long& resampled) {
  SampleStream rng(seed, static_cast<std::uint64_t>(j));
  for (;;) {
    VecXd u = rng.unit(ambient_dim(m));
    if (!critical_points(m, u).degenerate) return u;
    ++resampled;
  }
}

Estimate mean_and_stderr(double sum, double sum2, long count, double scale) {
  const double N = static_cast<double>(count);
  const double mean = sum / N;
  const double var = count > 1 ? std::max(0.0, (sum2 / N - mean * mean) * N / (N - 1)) : 0.0;
  return {scale * mean, scale * std::sqrt(var / N)};
}

}  // namespace

CriticalSet critical_points(const CatalogImmersion& m, const VecXd& u) {
  require(u.size() == ambient_dim(m), "critical_points: direction has the wrong dimension");
  CriticalSet cs;
  cs.u = u;
  switch (m.family) {
    case Family::UmbilicSphere: {
      if (u.head(m.n + 1).norm() < kDegenerateTol) {
        cs.degenerate = true;
        return cs;
      }
      cs.points = {{"min", 0}, {"max", m.n}};
      return cs;
    }
    case Family::SphereProduct:
    case Family::CliffordMinimal: {
      if (u.head(m.p + 1).norm() < kDegenerateTol || u.tail(m.q + 1).norm() < kDegenerateTol) {
        cs.degenerate = true;
        return cs;
      }
      // h_u is a sum of height functions on the factors.
      cs.points = {{"min,min", 0}, {"max,min", m.p}, {"min,max", m.q}, {"max,max", m.p + m.q}};
      return cs;
    }
  }
  throw std::invalid_argument("critical_points: unsupported member family");
}

std::vector<int> mu_counts(const CatalogImmersion& m, const VecXd& u) {
  std::vector<int> mu(m.n + 1, 0);
  const auto cs = critical_points(m, u);
  if (cs.degenerate) return mu;
  for (const auto& p : cs.points) ++mu[p.index];
  return mu;
}

TotalCurvature tau_all(const CatalogImmersion& m, long samples, std::uint64_t seed) {
  require(samples >= 2, "tau_all: need at least two samples");
  std::vector<double> sum(m.n + 1, 0.0), sum2(m.n + 1, 0.0);
  double tot = 0.0, tot2 = 0.0;
  TotalCurvature tc;
  for (long j = 0; j < samples; ++j) {
    const auto mu = mu_counts(m, generic_direction(m, seed, j, tc.resampled));
    double all = 0.0;
    for (int i = 0; i <= m.n; ++i) {
      sum[i] += mu[i];
      sum2[i] += double(mu[i]) * mu[i];
      all += mu[i];
    }
    tot += all;
    tot2 += all * all;
  }
  for (int i = 0; i <= m.n; ++i) {
    const auto e = mean_and_stderr(sum[i], sum2[i], samples, 1.0);
    tc.per_index.push_back(e.value);
    tc.per_index_stderr.push_back(e.error);
  }
  const auto e = mean_and_stderr(tot, tot2, samples, 1.0);
  tc.total = e.value;
  tc.stderr_total = e.error;
  return tc;
}

Estimate tau_index(const CatalogImmersion& m, int i, long samples, std::uint64_t seed) {
  require(i >= 0 && i <= m.n, "tau_index: index out of range");
  const auto tc = tau_all(m, samples, seed);
  return {tc.per_index[i], tc.per_index_stderr[i]};
}

namespace {

// Samples |det A_xi| (restricted to Index A_xi == index when index >= 0) over
// the unit normal sphere and returns int_{UN_f} of it.
Estimate normal_bundle_integral(const CatalogImmersion& m, int index, long samples, std::uint64_t seed) {
  require(samples >= 2, "normal bundle integral: need at least two samples");
  const double cut = kIndexTau * m.alpha.norm();
  double sum = 0.0, sum2 = 0.0;
  for (long j = 0; j < samples; ++j) {
    SampleStream rng(seed, static_cast<std::uint64_t>(j));
    const VecXd xi = rng.unit(m.k);
    Eigen::SelfAdjointEigenSolver<MatXd> es(shape_operator(m.alpha, xi).matrix(), Eigen::EigenvaluesOnly);
    double det = 1.0;
    int idx = 0;
    for (int t = 0; t < m.n; ++t) {
      const double ev = es.eigenvalues()(t);
      det *= std::abs(ev);
      if (ev < -cut) ++idx;
    }
    const double v = (index < 0 || idx == index) ? det : 0.0;
    sum += v;
    sum2 += v * v;
  }
  // Homogeneous member: the point integral is the volume.
  return mean_and_stderr(sum, sum2, samples, m.volume * sphere_volume(m.k - 1));
}

}  // namespace

Estimate tau_total(const CatalogImmersion& m, long samples, std::uint64_t seed) {
  const auto e = normal_bundle_integral(m, -1, samples, seed);
  const double vol = sphere_volume(m.n + m.k - 1);
  return {e.value / vol, e.error / vol};
}

ShiohamaXu shiohama_xu_check(const CatalogImmersion& m, int i, long samples, std::uint64_t seed) {
  require(i >= 0 && i <= m.n, "shiohama_xu_check: index out of range");
  ShiohamaXu out;
  out.lhs = normal_bundle_integral(m, i, samples, seed);
  const auto t = tau_index(m, i, samples, seed ^ 0xa5a5a5a5ULL);
  const double vol = sphere_volume(m.n + m.k - 1);
  out.rhs = {vol * t.value, vol * t.error};
  const double scale = std::max(std::abs(out.lhs.value), std::abs(out.rhs.value));
  out.relative_error = scale > 0 ? std::abs(out.lhs.value - out.rhs.value) / scale : 0.0;
  return out;
}

}  // namespace pinchlab
