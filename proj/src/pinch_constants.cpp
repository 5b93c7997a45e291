#include "pinchlab/pinch_constants.hpp"

#include "pinchlab/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>

namespace pinchlab {

std::string to_string(Variant v) { return v == Variant::Pinch ? "pinch" : "weyl"; }

Variant variant_from_string(const std::string& s) {
  if (s == "pinch") return Variant::Pinch;
  if (s == "weyl") return Variant::Weyl;
  throw std::invalid_argument("unknown variant: " + s);
}

int max_codimension(int n, Variant v) { return v == Variant::Pinch ? n / 2 : (n - 2) / 2; }

bool admissible(int n, int k, Variant v) { return n >= 4 && k >= 2 && k <= max_codimension(n, v); }

ObjectiveValue evaluate_objective(const VectorFormd& beta, double lambda, Variant v, const QuadratureSpec& q) {
  ObjectiveValue out;
  const RegionKind region = v == Variant::Pinch ? RegionKind::LambdaAuto : RegionKind::OmegaBand;
  out.psi = psi_integral(beta, region, q);
  if (!(out.psi.value > out.psi.error)) return out;
  out.phi = v == Variant::Pinch ? phi_pinch(beta, lambda) : phi_weyl(beta, lambda);
  out.value = out.phi / std::pow(out.psi.value, 4.0 / beta.n());
  return out;
}

double objective(const VectorFormd& beta, double lambda, Variant v, const QuadratureSpec& q) {
  return evaluate_objective(beta, lambda, v, q).value;
}

VectorFormd random_unit_form(int n, int k, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::vector<MatXd> c;
  for (int a = 0; a < k; ++a) {
    MatXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = gauss(rng);
    c.push_back(0.5 * (m + m.transpose()));
  }
  VectorFormd f(c);
  return (1.0 / f.norm()) * f;
}

std::vector<VectorFormd> structured_seeds(int n, int k) {
  std::vector<VectorFormd> out;
  VecXd xi = VecXd::Zero(k);
  xi(0) = 1.0;
  for (int p = 0; p <= n; ++p) {
    VecXd d = -VecXd::Ones(n);
    d.head(p).setOnes();
    MatXd a = d.asDiagonal();
    out.push_back((1.0 / std::sqrt(double(n))) * VectorFormd::rank_one(a, xi));
  }
  return out;
}

namespace {

// Upper-triangular coordinates of all components.
struct Coordinates {
  int n, k;

  int size() const { return k * n * (n + 1) / 2; }

  VecXd pack(const VectorFormd& f) const {
    VecXd x(size());
    int t = 0;
    for (int a = 0; a < k; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) x(t++) = f.component(a)(i, j);
    return x;
  }

  VectorFormd unpack(const VecXd& x) const {
    std::vector<MatXd> c(k, MatXd::Zero(n, n));
    int t = 0;
    for (int a = 0; a < k; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) c[a](i, j) = c[a](j, i) = x(t++);
    VectorFormd f(c);
    const double nn = f.norm();
    return nn > 0 ? (1.0 / nn) * f : f;
  }
};

struct RestartResult {
  double best = kInfeasible;
  VectorFormd witness;
  long evaluations = 0;
  std::vector<HistoryPoint> history;  // evaluation counts local to the restart
};

struct RestartPlan {
  long random_budget = 0;
  long local_budget = 0;
};

RestartResult run_restart(int n, int k, double lambda, Variant v, const QuadratureSpec& q, std::uint64_t seed,
                          int restart, const RestartPlan& plan, const SearchOptions& opt) {
  RestartResult res;
  auto consider = [&](const VectorFormd& f) {
    const double val = objective(f, lambda, v, q);
    ++res.evaluations;
    if (val < res.best) {
      res.best = val;
      res.witness = f;
      res.history.push_back({res.evaluations, val});
    }
    return val;
  };

  if (restart == 0) {
    for (const auto& s : opt.seeds) consider((1.0 / s.norm()) * s);
    for (const auto& s : structured_seeds(n, k)) consider(s);
  }

  std::seed_seq sseq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(sseq);
  while (res.evaluations < plan.random_budget) consider(random_unit_form(n, k, rng));
  if (!std::isfinite(res.best)) return res;

  // Coordinate pattern search on the unit sphere of forms.
  const Coordinates coords{n, k};
  VecXd x = coords.pack(res.witness);
  double fx = res.best;
  double step = opt.initial_step;
  const long stop = plan.random_budget + plan.local_budget;
  while (step >= opt.min_step && res.evaluations < stop) {
    bool improved = false;
    for (int i = 0; i < coords.size() && res.evaluations < stop; ++i) {
      for (double dir : {1.0, -1.0}) {
        if (res.evaluations >= stop) break;
        VecXd y = x;
        y(i) += dir * step;
        const VectorFormd f = coords.unpack(y);
        const double val = consider(f);
        if (val < fx) {
          x = coords.pack(f);
          fx = val;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return res;
}

}  // namespace

EstimateRecord estimate_epsilon(int n, int k, double lambda, Variant v, long budget, std::uint64_t seed,
                                const QuadratureSpec& q, const SearchOptions& opt) {
  require(admissible(n, k, v), "estimate_epsilon: (n, k) outside the admissible range for " + to_string(v));
  require(lambda > 1.0 / n && lambda < 1.0, "estimate_epsilon: lambda must lie in (1/n, 1)");
  require(budget >= 100, "estimate_epsilon: budget must be at least 100");
  require(opt.restarts >= 1, "estimate_epsilon: need at least one restart");
  validate(q, k);

  const long random_total = budget < 1000 ? budget : static_cast<long>(opt.random_fraction * budget);
  const long local_total = budget - random_total;
  std::vector<RestartPlan> plans(opt.restarts);
  for (int r = 0; r < opt.restarts; ++r) {
    plans[r].random_budget = random_total / opt.restarts + (r < random_total % opt.restarts ? 1 : 0);
    plans[r].local_budget = local_total / opt.restarts + (r < local_total % opt.restarts ? 1 : 0);
  }

  std::vector<RestartResult> results(opt.restarts);
  const int threads = std::max(1, opt.threads);
  for (int first = 0; first < opt.restarts; first += threads) {
    const int last = std::min(opt.restarts, first + threads);
    if (threads == 1) {
      results[first] = run_restart(n, k, lambda, v, q, seed, first, plans[first], opt);
      continue;
    }
    std::vector<std::future<RestartResult>> jobs;
    for (int r = first; r < last; ++r)
      jobs.push_back(std::async(std::launch::async, run_restart, n, k, lambda, v, std::cref(q), seed, r,
                                std::cref(plans[r]), std::cref(opt)));
    for (int r = first; r < last; ++r) results[r] = jobs[r - first].get();
  }

  EstimateRecord rec;
  rec.n = n;
  rec.k = k;
  rec.lambda = lambda;
  rec.variant = v;
  rec.budget = budget;
  rec.seed = seed;
  rec.quad = q;
  long offset = 0;
  for (const auto& r : results) {
    for (const auto& h : r.history)
      if (h.best < rec.epsilon_hat) {
        rec.epsilon_hat = h.best;
        rec.history.push_back({offset + h.evaluation, h.best});
      }
    offset += r.evaluations;
  }
  rec.evaluations = offset;
  // Ties go to the lowest restart index: strict '<' above keeps the first.
  for (const auto& r : results)
    if (r.best == rec.epsilon_hat) {
      rec.witness = r.witness;
      break;
    }
  if (std::isfinite(rec.epsilon_hat)) {
    const auto ov = evaluate_objective(rec.witness, lambda, v, q);
    rec.epsilon_error = ov.value * (4.0 / n) * ov.psi.error / ov.psi.value;
  }
  return rec;
}

EstimateRecord refine_with_candidates(const EstimateRecord& record, const std::vector<VectorFormd>& candidates) {
  EstimateRecord out = record;
  for (const auto& c : candidates) {
    require(c.n() == record.n && c.k() == record.k, "refine_with_candidates: shape mismatch");
    const double nn = c.norm();
    if (nn == 0.0) continue;
    const VectorFormd f = (1.0 / nn) * c;
    const auto ov = evaluate_objective(f, record.lambda, record.variant, record.quad);
    ++out.evaluations;
    if (ov.value < out.epsilon_hat) {
      out.epsilon_hat = ov.value;
      out.epsilon_error = ov.value * (4.0 / record.n) * ov.psi.error / ov.psi.value;
      out.witness = f;
      out.history.push_back({out.evaluations, ov.value});
    }
  }
  return out;
}

double constant_term(int n, int k, double epsilon) {
  return 2.0 * std::pow(epsilon / 2.0, n / 4.0) * sphere_volume(n + k - 1);
}

TheoremConstants derive_constants(int n, double delta, const std::vector<EstimateRecord>& records) {
  TheoremConstants tc;
  tc.n = n;
  tc.delta = delta;
  for (Variant v : {Variant::Pinch, Variant::Weyl}) {
    std::map<int, double> best;
    for (const auto& r : records) {
      if (r.n != n || r.variant != v || std::abs(r.lambda - delta) > 1e-12) continue;
      if (!std::isfinite(r.epsilon_hat)) continue;
      auto [it, fresh] = best.emplace(r.k, r.epsilon_hat);
      if (!fresh) it->second = std::min(it->second, r.epsilon_hat);
    }
    const int kmax = max_codimension(n, v);
    if (kmax < 2) continue;
    bool complete = true;
    for (int k = 2; k <= kmax; ++k) complete = complete && best.count(k);
    if (!complete) continue;
    double c = kInfeasible;
    for (int k = 2; k <= kmax; ++k) {
      const double term = constant_term(n, k, best[k]);
      tc.per_k.push_back({k, v, best[k], term});
      c = std::min(c, term);
    }
    (v == Variant::Pinch ? tc.c_hat : tc.c1_hat) = c;
  }
  require(tc.c_hat || tc.c1_hat, "derive_constants: records do not cover every admissible k for n = " +
                                     std::to_string(n) + ", delta = " + std::to_string(delta));
  return tc;
}

AuditResult audit(const EstimateRecord& record, long samples, std::uint64_t seed) {
  AuditResult out;
  std::mt19937_64 rng(seed);
  const double p = 4.0 / record.n;
  out.worst_slack = kInfeasible;
  for (long s = 0; s < samples; ++s) {
    const VectorFormd f = random_unit_form(record.n, record.k, rng);
    const auto ov = evaluate_objective(f, record.lambda, record.variant, record.quad);
    ++out.samples;
    const double phi = std::isfinite(ov.value) ? ov.phi
                       : record.variant == Variant::Pinch ? phi_pinch(f, record.lambda)
                                                          : phi_weyl(f, record.lambda);
    const double psi = std::max(ov.psi.value, 0.0);
    const double psip = std::pow(psi, p);
    // psi^{4/n} is concave, so the bracket below bounds the linearized error.
    const double err = record.epsilon_hat * (std::pow(psi + ov.psi.error, p) - psip) + psip * record.epsilon_error;
    const double slack = phi - (record.epsilon_hat * psip - 3.0 * err);
    out.worst_slack = std::min(out.worst_slack, slack);
    if (slack < 0) {
      ++out.violations;
      out.violators.push_back(f);
    }
  }
  return out;
}

}  // namespace pinchlab
