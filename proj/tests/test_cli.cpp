#include <filesystem>
#include <fstream>
#include <sstream>

#include "ccc/cli.hpp"
#include "ccc/models.hpp"
#include "ccc/parse.hpp"
#include "doctest.h"

using namespace ccc;
using cli::Json;

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("ccc_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write(const fs::path& path, const Json& j) {
  std::ofstream(path) << j.dump(2);
  return path.string();
}

std::string fermat_file(const fs::path& dir) {
  return write(dir / "variety.json", Json{{"n", 3}, {"degree", 4}, {"f", "x1^4+x2^4+x3^4"}});
}

}  // namespace

TEST_CASE("variety JSON round trip") {
  Json j = {{"n", 3}, {"degree", 4}, {"f", "x1^4 + x2^4 + x3^4"}};
  Hypersurface z = cli::variety_from_json(j);
  CHECK(z.n == 3);
  CHECK(z.degree == 4);
  Hypersurface back = cli::variety_from_json(cli::variety_to_json(z));
  CHECK(back.f == z.f);
  CHECK_THROWS_AS(cli::variety_from_json(Json{{"n", 3}, {"degree", 3}, {"f", "x1^4+x2^4+x3^4"}}), ConfigError);
  CHECK_THROWS_AS(cli::variety_from_json(Json{{"n", 3}}), ConfigError);
}

TEST_CASE("coframe JSON round trip") {
  for (const Coframe& omega :
       {model_flat(3), model_rescaled("1/(1-x1)", 3), model_twisted_default(3), model_heisenberg(4)}) {
    Coframe back = cli::coframe_from_json(cli::coframe_to_json(omega));
    CHECK(back.matrix() == omega.matrix());
    CHECK(back.chart().variables == omega.chart().variables);
  }
  Chart chart({"a", "b", "c"}, {Rational(1, 2), Rational(0), Rational(-1)});
  Coframe shifted(chart, identity_matrix(3, 3));
  Coframe back = cli::coframe_from_json(cli::coframe_to_json(shifted));
  CHECK(back.chart().base_point == chart.base_point);
  CHECK(back.chart().variables == chart.variables);

  Coframe tw = cli::coframe_from_json(Json{{"model", "twisted"}, {"n", 3}});
  CHECK(tw.matrix() == model_twisted_default(3).matrix());
  Coframe rs = cli::coframe_from_json(Json{{"model", "rescaled"}, {"n", 3}, {"scale", "1/(1-x1)"}});
  CHECK(rs.matrix() == model_rescaled("1/(1-x1)", 3).matrix());
  CHECK_THROWS_AS(cli::coframe_from_json(Json{{"model", "spiral"}}), ConfigError);
  CHECK_THROWS_AS(cli::coframe_from_json(Json::parse(R"({"A": [["1", "0"], ["0", "1"]]})")), DimensionError);
}

TEST_CASE("xi reports dimensions 3 and 3, stable") {
  fs::path dir = scratch("xi");
  Result r = run({"xi", "--variety", fermat_file(dir), "--seed", "3"});
  REQUIRE(r.code == cli::kPass);
  Json j = Json::parse(r.out);
  CHECK(j["command"] == "xi");
  CHECK(j["config"]["seed"] == 3);
  CHECK(j["result"]["dim_xi_Z"] == 3);
  CHECK(j["result"]["dim_xi_V"] == 3);
  CHECK(j["result"]["stable"] == true);
  CHECK(j["result"]["float_dim"] == 3);
  CHECK(j["passed"] == true);
  CHECK(j.contains("timings"));

  Result csv = run({"xi", "--variety", fermat_file(dir), "--seed", "3", "--format", "csv"});
  CHECK(csv.code == cli::kPass);
  CHECK(csv.out.rfind("check,passed,value,detail\n", 0) == 0);
  CHECK(csv.out.find("xi_Z_stable,true,3,") != std::string::npos);
}

TEST_CASE("xi rejects a singular variety with a witness") {
  fs::path dir = scratch("singular");
  std::string v = write(dir / "v.json", Json{{"n", 3}, {"degree", 3}, {"f", "x1^2*x2"}});
  Result r = run({"xi", "--variety", v, "--seed", "1", "--format", "csv"});
  CHECK(r.code == cli::kRejected);
  CHECK(r.out.find("smooth,false,singular") != std::string::npos);
}

TEST_CASE("configuration errors exit with code 3") {
  fs::path dir = scratch("config");
  CHECK(run({}).code == cli::kConfigError);
  CHECK(run({"xi", "--variety", fermat_file(dir)}).code == cli::kConfigError);  // no seed
  CHECK(run({"xi", "--variety", (dir / "missing.json").string(), "--seed", "1"}).code == cli::kConfigError);
  CHECK(run({"xi", "--variety", fermat_file(dir), "--seed", "1", "--backend", "quantum"}).code == cli::kConfigError);
  std::string bad = write(dir / "bad.json", Json{{"n", 3}, {"f", "x1^4 + + x2"}});
  CHECK(run({"xi", "--variety", bad, "--seed", "1"}).code == cli::kConfigError);
  CHECK(run({"certify", "--variety", fermat_file(dir), "--seed", "1"}).code == cli::kConfigError);
  CHECK(run({"model", "spiral", "--variety", fermat_file(dir)}).code == cli::kConfigError);
  CHECK(run({"--help"}).code == cli::kPass);
  CHECK(run({"--version"}).code == cli::kPass);
}

TEST_CASE("model files drive certify with the documented exit codes") {
  fs::path dir = scratch("models");
  const std::string variety = fermat_file(dir);
  for (const std::string kind : {"flat", "rescaled", "twisted"}) {
    Result m = run({"model", kind, "--variety", variety, "--out-dir", (dir / kind).string()});
    REQUIRE(m.code == cli::kPass);
    CHECK(fs::exists(dir / kind / "problem.json"));
  }
  Result flat = run({"certify", "--problem", (dir / "flat" / "problem.json").string(), "--seed", "1"});
  CHECK(flat.code == cli::kPass);
  CHECK(Json::parse(flat.out)["result"]["status"] == "flat");

  Result resc = run({"certify", "--problem", (dir / "rescaled" / "problem.json").string(), "--seed", "1"});
  CHECK(resc.code == cli::kPass);
  Json rj = Json::parse(resc.out)["result"];
  CHECK(rj["status"] == "conformally_flat");
  CHECK(parse_ratfunc(rj["f"].get<std::string>(), default_names(3)) == parse_ratfunc("1-x1", default_names(3)));
  CHECK(rj["f_rational"] == true);
  CHECK(rj["residuals"]["d_f_omega_exact"] == true);
  CHECK(rj["residuals"]["cone_product_deviation"].get<double>() < 1e-9);
  CHECK(rj["h_terms"].size() == 1);

  Result tw = run({"certify", "--problem", (dir / "twisted" / "problem.json").string(), "--seed", "1"});
  CHECK(tw.code == cli::kRejected);
  Json tj = Json::parse(tw.out)["result"];
  CHECK(tj["status"] == "rejected");
  CHECK(tj["stage"] == "characteristic_check");
  CHECK(tj["witness"]["residual"].get<double>() > 1e-7);

  // A custom twisted matrix through --matrix.
  Result custom = run({"model", "twisted", "--variety", variety, "--matrix", "1,0,0;0,1,x1;0,0,1"});
  CHECK(custom.code == cli::kPass);
  Json cj = Json::parse(custom.out)["result"]["coframe"];
  CHECK(cli::coframe_from_json(cj).matrix() == model_twisted_default(3).matrix());
}

TEST_CASE("report goes to --out") {
  fs::path dir = scratch("out");
  const std::string out = (dir / "report.json").string();
  Result r = run({"xi", "--variety", fermat_file(dir), "--seed", "1", "--out", out});
  CHECK(r.code == cli::kPass);
  CHECK(r.out.empty());
  std::ifstream in(out);
  CHECK(Json::parse(in)["result"]["dim_xi_Z"] == 3);
}

TEST_CASE("verify-identities is deterministic") {
  auto strip = [](const std::string& s) {
    Json j = Json::parse(s);
    j.erase("timings");
    return j;
  };
  Result a = run({"verify-identities", "--seed", "5", "--cases", "3"});
  Result b = run({"verify-identities", "--seed", "5", "--cases", "3"});
  REQUIRE(a.code == cli::kPass);
  CHECK(strip(a.out) == strip(b.out));
  Json j = strip(a.out);
  CHECK(j["checks"].size() == 7);
  for (const auto& c : j["checks"]) CHECK(c["value"] == "3/3");
}

TEST_CASE("selftest passes") {
  Result r = run({"selftest", "--format", "csv"});
  CHECK(r.code == cli::kPass);
  CHECK(r.out.find(",false,") == std::string::npos);
}
