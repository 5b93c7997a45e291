#include "pinchlab/cli.hpp"

#include "pinchlab/catalog.hpp"
#include "pinchlab/curvature.hpp"
#include "pinchlab/io.hpp"
#include "pinchlab/morse.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <tuple>

namespace pinchlab::cli {

namespace fs = std::filesystem;
using io::json;

std::string estimate_filename(const EstimateRecord& r) {
  return "estimate_n" + std::to_string(r.n) + "_k" + std::to_string(r.k) + "_" + to_string(r.variant) + "_l" +
         io::hex(r.lambda) + "_" + to_string(r.quad.method) + std::to_string(r.quad.nodes) + "_q" +
         std::to_string(r.quad.seed) + ".json";
}

std::string constants_filename(int n, double delta) {
  return "constants_n" + std::to_string(n) + "_d" + io::hex(delta) + ".json";
}

std::vector<EstimateRecord> load_records(const fs::path& dir) {
  using Key = std::tuple<int, int, double, int, int, int, std::uint64_t>;
  std::map<Key, std::pair<std::string, EstimateRecord>> newest;  // key -> (timestamp + filename, record)
  if (!fs::is_directory(dir)) return {};
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    const json env = io::read_json(f);
    if (env.value("kind", "") != "estimate_record") continue;
    EstimateRecord r = io::record_from_json(env.at("payload"));
    const Key key{r.n, r.k, r.lambda, static_cast<int>(r.variant), static_cast<int>(r.quad.method), r.quad.nodes,
                  r.quad.seed};
    const std::string stamp = env.at("timestamp").get<std::string>() + f.filename().string();
    auto it = newest.find(key);
    if (it == newest.end() || it->second.first <= stamp) newest[key] = {stamp, std::move(r)};
  }
  std::vector<EstimateRecord> out;
  for (auto& [k, v] : newest) out.push_back(std::move(v.second));
  return out;
}

fs::path merge_constants(const fs::path& dir, int n, double delta) {
  const auto records = load_records(dir);
  const TheoremConstants tc = derive_constants(n, delta, records);
  const fs::path path = dir / constants_filename(n, delta);
  json cfg = {{"command", "constants"}, {"n", n}, {"delta", io::hex(delta)}, {"records", records.size()}};
  io::write_atomic(path, io::envelope("theorem_constants", cfg, io::to_json(tc)).dump(2) + "\n");
  return path;
}

namespace {

struct Common {
  std::string out;
  std::uint64_t seed = 1;
  std::string quad_method;
  int quad_nodes = 1024;
};

QuadratureSpec quad_for(const Common& c, int k) {
  QuadratureSpec q = default_quadrature(k, c.quad_nodes, c.seed);
  if (!c.quad_method.empty()) q.method = quad_method_from_string(c.quad_method);
  validate(q, k);
  return q;
}

struct MemberArgs {
  std::string member = "sphere-product";
  int p = 2, q = 2, n = 4, k = 2;
  double r = 1.0, s = 1.0;
};

CatalogImmersion build_member(const MemberArgs& a) {
  if (a.member == "umbilic-sphere") return make_umbilic_sphere(a.n, a.k, a.r);
  if (a.member == "sphere-product") return make_sphere_product(a.p, a.q, a.r, a.s);
  if (a.member == "clifford-minimal") return make_clifford_minimal(a.p, a.q);
  throw std::invalid_argument("unknown member: " + a.member);
}

void add_member_flags(CLI::App* app, MemberArgs& a) {
  app->add_option("--member", a.member, "umbilic-sphere | sphere-product | clifford-minimal");
  app->add_option("--p", a.p, "first factor dimension");
  app->add_option("--q", a.q, "second factor dimension");
  app->add_option("--r", a.r, "first radius (sphere radius for umbilic-sphere)");
  app->add_option("--s", a.s, "second radius");
  app->add_option("--n", a.n, "dimension (umbilic-sphere)");
  app->add_option("--k", a.k, "codimension (umbilic-sphere)");
}

json common_json(const Common& c) {
  return {{"out", c.out}, {"seed", c.seed}, {"quad_method", c.quad_method}, {"quad_nodes", c.quad_nodes}};
}

int cmd_estimate(const Common& c, int n, int k, double lambda, const std::string& variant, long budget,
                 int restarts, int threads) {
  const Variant v = variant_from_string(variant);
  if (!admissible(n, k, v) || !(lambda > 1.0 / n && lambda < 1.0)) {
    std::cerr << "estimate: inadmissible (n, k, lambda) = (" << n << ", " << k << ", " << lambda << ") for "
              << variant << "\n";
    return kInadmissible;
  }
  SearchOptions opt;
  opt.restarts = restarts;
  opt.threads = threads;
  const EstimateRecord r = estimate_epsilon(n, k, lambda, v, budget, c.seed, quad_for(c, k), opt);
  json cfg = common_json(c);
  cfg["command"] = "estimate";
  cfg["n"] = n;
  cfg["k"] = k;
  cfg["lambda"] = io::hex(lambda);
  cfg["variant"] = variant;
  cfg["budget"] = budget;
  cfg["restarts"] = restarts;
  const fs::path dir(c.out);
  const fs::path path = dir / estimate_filename(r);
  io::write_atomic(path, io::envelope("estimate_record", cfg, io::to_json(r)).dump(2) + "\n");
  io::append_csv(dir / "estimates.csv", io::csv_header_estimate(), io::csv_row(r));
  std::cout << "estimate n=" << n << " k=" << k << " lambda=" << lambda << " variant=" << variant
            << " epsilon_hat=" << r.epsilon_hat << " (upper bound, +/- " << r.epsilon_error << ") -> "
            << path.string() << "\n";
  return kOk;
}

int cmd_constants(const Common& c, int n, double delta) {
  const fs::path path = merge_constants(c.out, n, delta);
  const auto tc = io::constants_from_json(io::read_json(path).at("payload"));
  std::cout << "constants n=" << n << " delta=" << delta;
  if (tc.c_hat) std::cout << " c_hat=" << *tc.c_hat;
  if (tc.c1_hat) std::cout << " c1_hat=" << *tc.c1_hat;
  std::cout << " -> " << path.string() << "\n";
  return kOk;
}

std::optional<TheoremConstants> find_constants(const std::string& file, const fs::path& dir, int n, double delta) {
  if (!file.empty()) return io::constants_from_json(io::read_json(file).at("payload"));
  const fs::path p = dir / constants_filename(n, delta);
  if (fs::exists(p)) return io::constants_from_json(io::read_json(p).at("payload"));
  return std::nullopt;
}

int cmd_catalog(const Common& c, const MemberArgs& a, double delta, const std::string& check,
                const std::string& constants_file, bool list) {
  const fs::path dir(c.out);
  if (list) {
    json members = json::array({io::to_json(make_umbilic_sphere(4, 2, 1.0)),
                                io::to_json(make_sphere_product(2, 2, 1.0, 1.0)),
                                io::to_json(make_sphere_product(3, 3, 1.0, 1.0)),
                                io::to_json(make_clifford_minimal(2, 2))});
    std::cout << members.dump(2) << "\n";
    return kOk;
  }
  const CatalogImmersion m = build_member(a);
  TheoremConstants tc;
  tc.n = m.n;
  tc.delta = delta;
  if (auto found = find_constants(constants_file, dir, m.n, delta)) tc = *found;

  std::vector<InequalityReport> reports;
  if (check == "theorem1" || check == "all") reports.push_back(evaluate_theorem1(m, delta, tc));
  if (check == "theorem5" || check == "all") reports.push_back(evaluate_theorem5(m, delta, tc));
  if ((check == "corollary" || check == "all") && m.family == Family::CliffordMinimal)
    reports.push_back(evaluate_corollary_minimal(m, delta, tc));
  if (reports.empty()) throw std::invalid_argument("catalog: unknown check " + check);

  json cfg = common_json(c);
  cfg["command"] = "catalog";
  cfg["member"] = a.member;
  cfg["delta"] = io::hex(delta);
  cfg["check"] = check;
  for (const auto& r : reports) {
    const fs::path path = dir / ("report_" + a.member + "_n" + std::to_string(m.n) + "_" + r.check + "_d" +
                                 io::hex(delta) + ".json");
    io::write_atomic(path, io::envelope("inequality_report", cfg, io::to_json(r)).dump(2) + "\n");
    io::append_csv(dir / "reports.csv", io::csv_header_report(), io::csv_row(r));
    std::cout << r.check << " " << m.name << " delta=" << delta << " lhs=" << r.lhs << " rhs=" << r.rhs
              << " " << to_string(r.applicability) << (r.satisfied ? " satisfied" : " not-satisfied") << "\n";
  }
  return kOk;
}

int cmd_morse(const Common& c, const MemberArgs& a, long samples) {
  const CatalogImmersion m = build_member(a);
  TotalCurvature tc = tau_all(m, samples, c.seed);
  const Estimate tau = tau_total(m, samples, c.seed);
  json payload = io::to_json(tc);
  payload["tau_normal_bundle"] = io::hex(tau.value);
  payload["tau_normal_bundle_stderr"] = io::hex(tau.error);
  payload["tau_normal_bundle_decimal"] = tau.value;
  json cfg = common_json(c);
  cfg["command"] = "morse";
  cfg["member"] = a.member;
  cfg["samples"] = samples;
  const fs::path dir(c.out);
  io::write_atomic(dir / ("morse_" + a.member + "_n" + std::to_string(m.n) + ".json"),
                   io::envelope("total_curvature", cfg, payload).dump(2) + "\n");
  std::ostringstream row;
  row.precision(17);
  row << '"' << m.name << "\"," << samples << ',' << tc.total << ',' << tau.value << ',' << tau.error;
  io::append_csv(dir / "morse.csv", "member,samples,tau_from_mu,tau_normal_bundle,tau_stderr", row.str());
  std::cout << "morse " << m.name << " tau(mu)=" << tc.total << " tau(normal bundle)=" << tau.value << " +/- "
            << tau.error << "\n";
  return kOk;
}

int cmd_verify_props(const Common& c, long samples) {
  std::mt19937_64 rng(c.seed);
  long failures = 0;
  double worst = 0.0;
  for (long s = 0; s < samples; ++s) {
    const int n = 4 + static_cast<int>(s % 5), k = 2 + static_cast<int>(s % 2);
    const VectorFormd b = random_unit_form(n, k, rng);
    const double scal_id = std::abs(scal_of(b) - (b.trace().squaredNorm() - b.norm2()));
    const double decomp =
        (r_of(b) - w_of(b) - kn_scalar(l_of(b), ScalarFormd::identity(n))).max_abs();
    double trace_free = 0.0;
    const auto w = w_of(b);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        double t = 0.0;
        for (int i = 0; i < n; ++i) t += w(i, x, i, y);
        trace_free = std::max(trace_free, std::abs(t));
      }
    const double e = std::max({scal_id, decomp, trace_free});
    worst = std::max(worst, e);
    if (e > 1e-10) ++failures;
  }
  json cfg = common_json(c);
  cfg["command"] = "verify-props";
  cfg["samples"] = samples;
  json payload = {{"samples", samples}, {"failures", failures}, {"worst_error", io::hex(worst)}};
  io::write_atomic(fs::path(c.out) / "verify_props.json",
                   io::envelope("property_report", cfg, payload).dump(2) + "\n");
  std::cout << "verify-props samples=" << samples << " failures=" << failures << " worst=" << worst << "\n";
  return failures ? kFailure : kOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"pinchlab: curvature-tensor algebra and pinching-constant workbench"};
  app.require_subcommand(1);

  Common common;
  const char* env = std::getenv(kOutEnv);
  common.out = env && *env ? env : "results";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", common.out, "output directory");
    sub->add_option("--seed", common.seed, "random seed");
    sub->add_option("--quad-method", common.quad_method, "circle-composite | sphere-montecarlo");
    sub->add_option("--quad-nodes", common.quad_nodes, "quadrature nodes");
  };

  int n = 4, k = 2, restarts = 20, threads = 1;
  double lambda = 0.5, delta = 0.5;
  std::string variant = "pinch", check = "all", constants_file;
  long budget = 50000, samples = 1000000;
  bool list = false;
  MemberArgs member;

  auto* est = app.add_subcommand("estimate", "estimate epsilon(n, k, lambda)");
  add_common(est);
  est->add_option("--n", n)->required();
  est->add_option("--k", k)->required();
  est->add_option("--lambda", lambda)->required();
  est->add_option("--variant", variant, "pinch | weyl");
  est->add_option("--budget", budget, "objective evaluations");
  est->add_option("--restarts", restarts);
  est->add_option("--threads", threads);

  auto* con = app.add_subcommand("constants", "derive c(n, delta) and c1(n, delta) from stored estimates");
  add_common(con);
  con->add_option("--n", n)->required();
  con->add_option("--delta", delta, "pinching parameter in (1/n, 1)")->required();

  auto* cat = app.add_subcommand("catalog", "evaluate the integral inequalities on a catalog member");
  add_common(cat);
  add_member_flags(cat, member);
  cat->add_option("--delta", delta, "pinching parameter in (1/n, 1)");
  cat->add_option("--check", check, "theorem1 | theorem5 | corollary | all");
  cat->add_option("--constants", constants_file, "constants envelope to use");
  cat->add_flag("--list", list, "print the catalog members as JSON");

  auto* mor = app.add_subcommand("morse", "total curvature of a catalog member");
  add_common(mor);
  add_member_flags(mor, member);
  mor->add_option("--samples", samples);

  auto* ver = app.add_subcommand("verify-props", "identity checks on random forms");
  add_common(ver);
  long prop_samples = 200;
  ver->add_option("--samples", prop_samples);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInadmissible;
  }

  try {
    if (*est) return cmd_estimate(common, n, k, lambda, variant, budget, restarts, threads);
    if (*con) return cmd_constants(common, n, delta);
    if (*cat) return cmd_catalog(common, member, delta, check, constants_file, list);
    if (*mor) return cmd_morse(common, member, samples);
    if (*ver) return cmd_verify_props(common, prop_samples);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInadmissible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  }
  return kFailure;
}

}  // namespace pinchlab::cli
