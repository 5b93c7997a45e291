#include "pinchlab/io.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pinchlab::io {

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double unhex(const json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::runtime_error("bad hex float: " + s);
  return v;
}

json to_json(const VectorFormd& f) {
  json comps = json::array();
  for (int a = 0; a < f.k(); ++a) {
    json rows = json::array();
    for (int i = 0; i < f.n(); ++i) {
      json row = json::array();
      for (int j = 0; j < f.n(); ++j) row.push_back(hex(f.component(a)(i, j)));
      rows.push_back(row);
    }
    comps.push_back(rows);
  }
  return {{"n", f.n()}, {"k", f.k()}, {"components", comps}};
}

VectorFormd form_from_json(const json& j) {
  const int n = j.at("n"), k = j.at("k");
  std::vector<MatXd> c;
  for (int a = 0; a < k; ++a) {
    MatXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int jj = 0; jj < n; ++jj) m(i, jj) = unhex(j.at("components").at(a).at(i).at(jj));
    c.push_back(m);
  }
  return VectorFormd(c);
}

json to_json(const QuadratureSpec& q) {
  return {{"method", to_string(q.method)}, {"nodes", q.nodes}, {"seed", q.seed}};
}

QuadratureSpec quad_from_json(const json& j) {
  return {quad_method_from_string(j.at("method")), j.at("nodes").get<int>(), j.at("seed").get<std::uint64_t>()};
}

json to_json(const EstimateRecord& r) {
  json hist = json::array();
  for (const auto& h : r.history) hist.push_back({h.evaluation, hex(h.best)});
  json out = {{"n", r.n},
              {"k", r.k},
              {"lambda", hex(r.lambda)},
              {"lambda_decimal", r.lambda},
              {"variant", to_string(r.variant)},
              {"epsilon_hat", hex(r.epsilon_hat)},
              {"epsilon_hat_decimal", r.epsilon_hat},
              {"epsilon_error", hex(r.epsilon_error)},
              {"bound", "upper"},
              {"budget", r.budget},
              {"evaluations", r.evaluations},
              {"seed", r.seed},
              {"quad", to_json(r.quad)},
              {"history", hist}};
  out["witness"] = r.witness.k() ? to_json(r.witness) : json(nullptr);
  return out;
}

EstimateRecord record_from_json(const json& j) {
  EstimateRecord r;
  r.n = j.at("n");
  r.k = j.at("k");
  r.lambda = unhex(j.at("lambda"));
  r.variant = variant_from_string(j.at("variant"));
  r.epsilon_hat = unhex(j.at("epsilon_hat"));
  r.epsilon_error = unhex(j.at("epsilon_error"));
  r.budget = j.at("budget");
  r.evaluations = j.at("evaluations");
  r.seed = j.at("seed");
  r.quad = quad_from_json(j.at("quad"));
  for (const auto& h : j.at("history")) r.history.push_back({h.at(0).get<long>(), unhex(h.at(1))});
  if (!j.at("witness").is_null()) r.witness = form_from_json(j.at("witness"));
  return r;
}

json to_json(const TheoremConstants& c) {
  json rows = json::array();
  for (const auto& r : c.per_k)
    rows.push_back({{"k", r.k},
                    {"variant", to_string(r.variant)},
                    {"epsilon_hat", hex(r.epsilon_hat)},
                    {"term", hex(r.term)},
                    {"term_decimal", r.term}});
  json out = {{"n", c.n}, {"delta", hex(c.delta)}, {"delta_decimal", c.delta}};
  out["c_hat"] = c.c_hat ? json(hex(*c.c_hat)) : json(nullptr);
  out["c_hat_decimal"] = c.c_hat ? json(*c.c_hat) : json(nullptr);
  out["c1_hat"] = c.c1_hat ? json(hex(*c.c1_hat)) : json(nullptr);
  out["c1_hat_decimal"] = c.c1_hat ? json(*c.c1_hat) : json(nullptr);
  out["per_k"] = rows;
  return out;
}

TheoremConstants constants_from_json(const json& j) {
  TheoremConstants c;
  c.n = j.at("n");
  c.delta = unhex(j.at("delta"));
  if (!j.at("c_hat").is_null()) c.c_hat = unhex(j.at("c_hat"));
  if (!j.at("c1_hat").is_null()) c.c1_hat = unhex(j.at("c1_hat"));
  for (const auto& r : j.at("per_k"))
    c.per_k.push_back({r.at("k").get<int>(), variant_from_string(r.at("variant")), unhex(r.at("epsilon_hat")),
                       unhex(r.at("term"))});
  return c;
}

json to_json(const InequalityReport& r) {
  json out = {{"member", r.member},
              {"check", r.check},
              {"n", r.n},
              {"k", r.k},
              {"delta", hex(r.delta)},
              {"applicability", to_string(r.applicability)},
              {"nonpositive_scal_branch", to_string(r.nonpositive_scal_branch)},
              {"lhs_terms",
               {{"curvature_norm_integral", hex(r.curvature_norm_integral)},
                {"pinch_integral", hex(r.pinch_integral)}}},
              {"rhs", {{"constant", hex(r.constant)}, {"betti_sum", r.betti_sum}}},
              {"band", {r.band_lo, r.band_hi}},
              {"lhs", hex(r.lhs)},
              {"rhs_total", hex(r.rhs)},
              {"margin", hex(r.margin)},
              {"satisfied", r.satisfied},
              {"decimal",
               {{"curvature_norm_integral", r.curvature_norm_integral},
                {"pinch_integral", r.pinch_integral},
                {"constant", r.constant},
                {"lhs", r.lhs},
                {"rhs", r.rhs},
                {"margin", r.margin}}}};
  out["candidate"] = r.candidate ? to_json(*r.candidate) : json(nullptr);
  return out;
}

json to_json(const TotalCurvature& t) {
  json per = json::array(), err = json::array();
  for (std::size_t i = 0; i < t.per_index.size(); ++i) {
    per.push_back(hex(t.per_index[i]));
    err.push_back(hex(t.per_index_stderr[i]));
  }
  return {{"per_index", per},
          {"per_index_stderr", err},
          {"total", hex(t.total)},
          {"total_decimal", t.total},
          {"stderr", hex(t.stderr_total)},
          {"resampled", t.resampled}};
}

json to_json(const CatalogImmersion& m) {
  return {{"name", m.name},
          {"family", to_string(m.family)},
          {"n", m.n},
          {"k", m.k},
          {"p", m.p},
          {"q", m.q},
          {"r", hex(m.r)},
          {"s", hex(m.s)},
          {"betti", m.betti},
          {"volume", hex(m.volume)},
          {"alpha", to_json(m.alpha)}};
}

json envelope(const std::string& kind, const json& config, const json& payload) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return {{"schema_version", kSchemaVersion}, {"timestamp", buf}, {"kind", kind}, {"config", config},
          {"payload", payload}};
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::filesystem::filesystem_error("cannot open for writing", tmp, std::error_code());
    out << text;
    if (!out) throw std::filesystem::filesystem_error("write failed", tmp, std::error_code());
  }
  std::filesystem::rename(tmp, path);
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::filesystem::filesystem_error("cannot open for reading", path, std::error_code());
  return json::parse(in);
}

void append_csv(const std::filesystem::path& path, const std::string& header, const std::string& row) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::filesystem::filesystem_error("cannot open for append", path, std::error_code());
  if (fresh) out << header << '\n';
  out << row << '\n';
}

std::string csv_header_estimate() { return "n,k,lambda,variant,epsilon_hat,epsilon_error,budget,seed,quad_method,quad_nodes"; }

std::string csv_row(const EstimateRecord& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.n << ',' << r.k << ',' << r.lambda << ',' << to_string(r.variant) << ',' << r.epsilon_hat << ','
     << r.epsilon_error << ',' << r.budget << ',' << r.seed << ',' << to_string(r.quad.method) << ','
     << r.quad.nodes;
  return os.str();
}

std::string csv_header_report() {
  return "member,check,n,k,delta,curvature_norm_integral,pinch_integral,constant,betti_sum,lhs,rhs,margin,"
         "satisfied,applicability";
}

std::string csv_row(const InequalityReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << '"' << r.member << "\"," << r.check << ',' << r.n << ',' << r.k << ',' << r.delta << ','
     << r.curvature_norm_integral << ',' << r.pinch_integral << ',' << r.constant << ',' << r.betti_sum << ','
     << r.lhs << ',' << r.rhs << ',' << r.margin << ',' << (r.satisfied ? 1 : 0) << ','
     << to_string(r.applicability);
  return os.str();
}

}  // namespace pinchlab::io
