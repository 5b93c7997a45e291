#pragma once

// Numerical upper-bound estimates of the pinching constants: the minimum of
// phi(beta) / psi(beta)^{4/n} over nonzero forms, and the theorem constants
// derived from those minima.

#include "pinchlab/forms.hpp"
#include "pinchlab/sphere_index.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace pinchlab {

/// pinch: curvature-deviation functional over the Lambda region.
/// weyl: Weyl-norm functional over the Omega band.
enum class Variant { Pinch, Weyl };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

/// Admissible codimensions: 2 <= k <= n/2 (pinch), 2 <= k <= (n-2)/2 (weyl).
int max_codimension(int n, Variant v);
bool admissible(int n, int k, Variant v);

inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

struct ObjectiveValue {
  double value = kInfeasible;  // phi / psi^{4/n}, or +inf when psi is below its error
  double phi = 0.0;
  Estimate psi;
};

ObjectiveValue evaluate_objective(const VectorFormd& beta, double lambda, Variant v, const QuadratureSpec& q);

/// phi(beta) / psi(beta)^{4/n}; +inf when psi(beta) <= its quadrature error.
double objective(const VectorFormd& beta, double lambda, Variant v, const QuadratureSpec& q);

struct HistoryPoint {
  long evaluation = 0;
  double best = kInfeasible;
};

/// epsilon_hat is an upper bound on the true constant: it is the objective of
/// an explicit witness.
struct EstimateRecord {
  int n = 0;
  int k = 0;
  double lambda = 0.0;
  Variant variant = Variant::Pinch;
  double epsilon_hat = kInfeasible;
  double epsilon_error = 0.0;  // propagated from the witness' psi error
  VectorFormd witness;
  long budget = 0;
  long evaluations = 0;
  std::uint64_t seed = 0;
  QuadratureSpec quad;
  std::vector<HistoryPoint> history;
};

struct SearchOptions {
  int restarts = 20;
  double random_fraction = 0.2;
  double initial_step = 0.25;
  double min_step = 1e-6;
  int threads = 1;
  std::vector<VectorFormd> seeds;  // extra starting candidates, evaluated first
};

/// Multi-start random sampling of unit-norm forms followed by coordinate
/// pattern search. Deterministic for fixed (seed, budget, quad, options).
EstimateRecord estimate_epsilon(int n, int k, double lambda, Variant v, long budget, std::uint64_t seed,
                                const QuadratureSpec& q, const SearchOptions& opt = {});

/// Sign-pattern forms diag(+1 x p, -1 x (n-p)) xi_1, p = 0..n.
std::vector<VectorFormd> structured_seeds(int n, int k);

/// Lowers epsilon_hat to the best candidate objective.
EstimateRecord refine_with_candidates(const EstimateRecord& record, const std::vector<VectorFormd>& candidates);

struct TheoremConstants {
  int n = 0;
  double delta = 0.0;
  std::optional<double> c_hat;   // pinch records, 2 <= k <= n/2
  std::optional<double> c1_hat;  // weyl records, 2 <= k <= (n-2)/2
  struct Row {
    int k;
    Variant variant;
    double epsilon_hat;
    double term;
  };
  std::vector<Row> per_k;
};

/// 2 (eps/2)^{n/4} Vol(S^{n+k-1})
double constant_term(int n, int k, double epsilon);

/// Min over admissible k of constant_term. Throws when neither variant has
/// records for every admissible k at lambda = delta.
TheoremConstants derive_constants(int n, double delta, const std::vector<EstimateRecord>& records);

/// Unit-norm Gaussian form.
VectorFormd random_unit_form(int n, int k, std::mt19937_64& rng);

struct AuditResult {
  long samples = 0;
  long violations = 0;
  double worst_slack = 0.0;  // min of phi - (eps psi^{4/n} - 3 err)
  std::vector<VectorFormd> violators;
};

/// Checks phi(beta) >= eps psi^{4/n} - 3 err on fresh random forms.
AuditResult audit(const EstimateRecord& record, long samples, std::uint64_t seed);

}  // namespace pinchlab
