#include "oracles.hpp"
#include "pinchlab/cli.hpp"
#include "pinchlab/io.hpp"

#include <doctest.h>

#include <unistd.h>

using namespace pinchlab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("pinchlab_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::vector<fs::path> json_files(const fs::path& dir, const std::string& prefix) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json" && e.path().filename().string().rfind(prefix, 0) == 0)
      out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

void write_record(const fs::path& dir, const EstimateRecord& r) {
  io::write_atomic(dir / cli::estimate_filename(r), io::envelope("estimate_record", {}, io::to_json(r)).dump());
}

EstimateRecord fake_record(int n, int k, double lambda, double eps) {
  EstimateRecord r;
  r.n = n;
  r.k = k;
  r.lambda = lambda;
  r.epsilon_hat = eps;
  r.quad = default_quadrature(k, 256);
  return r;
}

}  // namespace

TEST_CASE("hex floats round trip bit-exactly") {
  for (double v : {0.1, -1.0 / 3.0, 7.0 / 9.0, 1e-300, 6.02e23, 0.0})
    CHECK(io::unhex(io::json(io::hex(v))) == v);
  CHECK_THROWS(io::unhex(io::json("0x1.zz")));
}

TEST_CASE("estimate records round trip") {
  const auto r = estimate_epsilon(4, 2, 0.6, Variant::Pinch, 150, 3, default_quadrature(2, 128));
  const auto back = io::record_from_json(io::json::parse(io::to_json(r).dump()));
  CHECK(back.epsilon_hat == r.epsilon_hat);
  CHECK(back.epsilon_error == r.epsilon_error);
  CHECK(back.lambda == r.lambda);
  CHECK(back.quad == r.quad);
  CHECK(back.history.size() == r.history.size());
  for (int a = 0; a < r.k; ++a) CHECK(back.witness.component(a) == r.witness.component(a));
  CHECK(io::to_json(back).dump() == io::to_json(r).dump());
}

TEST_CASE("constants round trip") {
  const auto tc = derive_constants(4, 0.6, {fake_record(4, 2, 0.6, 1.7)});
  const auto back = io::constants_from_json(io::json::parse(io::to_json(tc).dump()));
  CHECK(*back.c_hat == *tc.c_hat);
  CHECK_FALSE(back.c1_hat);
  CHECK(back.per_k.size() == 1);
}

TEST_CASE("estimate command writes an envelope and a CSV row") {
  TempDir dir("estimate");
  const int rc = cli::run({"estimate", "--n", "4", "--k", "2", "--lambda", "0.6", "--budget", "150", "--quad-nodes",
                           "128", "--out", dir.path.string()});
  CHECK(rc == cli::kOk);
  const auto files = json_files(dir.path, "estimate_");
  REQUIRE(files.size() == 1);
  const auto env = io::read_json(files[0]);
  CHECK(env.at("schema_version") == 1);
  CHECK(env.at("kind") == "estimate_record");
  CHECK(env.at("payload").at("bound") == "upper");
  CHECK(fs::exists(dir.path / "estimates.csv"));
}

TEST_CASE("inadmissible and malformed requests exit with 2") {
  TempDir dir("bad");
  const auto out = dir.path.string();
  CHECK(cli::run({"estimate", "--n", "6", "--k", "4", "--lambda", "0.5", "--out", out}) == cli::kInadmissible);
  CHECK(cli::run({"estimate", "--n", "6", "--k", "2", "--lambda", "0.1", "--out", out}) == cli::kInadmissible);
  CHECK(cli::run({"estimate", "--n", "6"}) == cli::kInadmissible);
  CHECK(cli::run({"constants", "--n", "4", "--delta", "0.6", "--out", out}) == cli::kInadmissible);
  CHECK(cli::run({"frobnicate"}) == cli::kInadmissible);
  CHECK(cli::run({"catalog", "--member", "torus", "--out", out}) == cli::kInadmissible);
}

TEST_CASE("unwritable output directory exits with 3") {
  CHECK(cli::run({"catalog", "--member", "sphere-product", "--delta", "0.6", "--out", "/proc/pinchlab/out"}) ==
        cli::kIoError);
}

TEST_CASE("reruns give byte-identical payloads") {
  TempDir a("det_a"), b("det_b");
  for (const auto* d : {&a, &b})
    REQUIRE(cli::run({"estimate", "--n", "6", "--k", "3", "--lambda", "0.5", "--budget", "200", "--seed", "5",
                      "--quad-nodes", "64", "--out", d->path.string()}) == cli::kOk);
  const auto fa = json_files(a.path, "estimate_"), fb = json_files(b.path, "estimate_");
  REQUIRE(fa.size() == 1);
  REQUIRE(fb.size() == 1);
  CHECK(fa[0].filename() == fb[0].filename());
  CHECK(io::read_json(fa[0]).at("payload").dump() == io::read_json(fb[0]).at("payload").dump());
}

TEST_CASE("constants merge takes the minimum over full coverage") {
  TempDir dir("merge");
  write_record(dir.path, fake_record(8, 2, 0.5, 5.0));
  write_record(dir.path, fake_record(8, 3, 0.5, 4.0));
  CHECK_THROWS_AS(cli::merge_constants(dir.path, 8, 0.5), std::invalid_argument);
  write_record(dir.path, fake_record(8, 4, 0.5, 3.0));
  const auto path = cli::merge_constants(dir.path, 8, 0.5);
  const auto tc = io::constants_from_json(io::read_json(path).at("payload"));
  double expect = kInfeasible;
  for (int k = 2; k <= 4; ++k) expect = std::min(expect, constant_term(8, k, 7.0 - k));
  CHECK(*tc.c_hat == expect);
  CHECK(cli::load_records(dir.path).size() == 3);
}

TEST_CASE("singleton directory") {
  TempDir dir("single");
  write_record(dir.path, fake_record(4, 2, 0.6, 2.0));
  CHECK(cli::run({"constants", "--n", "4", "--delta", "0.6", "--out", dir.path.string()}) == cli::kOk);
  const auto tc =
      io::constants_from_json(io::read_json(dir.path / cli::constants_filename(4, 0.6)).at("payload"));
  CHECK(*tc.c_hat == constant_term(4, 2, 2.0));
}

TEST_CASE("catalog and morse commands") {
  TempDir dir("catalog");
  const auto out = dir.path.string();
  CHECK(cli::run({"catalog", "--member", "sphere-product", "--p", "2", "--q", "2", "--delta", "0.6", "--out", out}) ==
        cli::kOk);
  const auto reports = json_files(dir.path, "report_");
  REQUIRE(!reports.empty());
  const auto env = io::read_json(reports[0]);
  CHECK(env.at("kind") == "inequality_report");
  CHECK(env.at("payload").at("applicability") == "missing-constant");
  CHECK(cli::run({"catalog", "--list", "--out", out}) == cli::kOk);
  CHECK(cli::run({"morse", "--member", "umbilic-sphere", "--n", "4", "--k", "2", "--samples", "1000", "--out",
                  out}) == cli::kOk);
  CHECK(cli::run({"verify-props", "--samples", "20", "--out", out}) == cli::kOk);
}

TEST_CASE("newest envelope wins per key") {
  TempDir dir("newest");
  auto r = fake_record(4, 2, 0.6, 2.0);
  io::json older = io::envelope("estimate_record", {}, io::to_json(r));
  older["timestamp"] = "2000-01-01T00:00:00Z";
  io::write_atomic(dir.path / "a_old.json", older.dump());
  r.epsilon_hat = 1.5;
  write_record(dir.path, r);
  const auto recs = cli::load_records(dir.path);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].epsilon_hat == 1.5);
}

TEST_CASE("end-to-end estimate stays below the counterexample objective") {
  TempDir dir("smoke");
  REQUIRE(cli::run({"estimate", "--n", "7", "--k", "2", "--lambda", "0.7778", "--variant", "pinch", "--budget", "300",
                    "--seed", "1", "--out", dir.path.string()}) == cli::kOk);
  const auto files = json_files(dir.path, "estimate_");
  REQUIRE(files.size() == 1);
  const auto r = io::record_from_json(io::read_json(files[0]).at("payload"));
  CHECK(r.epsilon_hat <= oracle::remark_objective() * (1 + 1e-12));
}
