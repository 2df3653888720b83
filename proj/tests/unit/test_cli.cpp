#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "xilab/cli.hpp"
#include "xilab/errors.hpp"

using namespace xilab;
using namespace xilab::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "xilab");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("xilab_cli_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("complex literals") {
  CHECK(parse_complex("0.5+14.1i") == Complex(0.5, 14.1));
  CHECK(parse_complex("0.5 - 2i") == Complex(0.5, -2.0));
  CHECK(parse_complex("-3") == Complex(-3.0, 0.0));
  CHECK(parse_complex("2i") == Complex(0.0, 2.0));
  CHECK(parse_complex("-i") == Complex(0.0, -1.0));
  CHECK(parse_complex("1e-3+1e+2i") == Complex(1e-3, 100.0));
  CHECK(parse_complex("+1+i") == Complex(1.0, 1.0));
  CHECK_THROWS_AS(parse_complex(""), UsageError);
  CHECK_THROWS_AS(parse_complex("abc"), UsageError);
  CHECK_THROWS_AS(parse_complex("1+2j"), UsageError);
  CHECK_THROWS_AS(parse_complex("1++2i"), UsageError);
}

TEST_CASE("region literals") {
  const Region r = parse_region("0.05:1:0:100", 128, 512);
  CHECK(r.x_min == 0.05);
  CHECK(r.y_max == 100.0);
  CHECK(r.ny == 512);
  CHECK_THROWS_AS(parse_region("0:1:0", 4, 4), UsageError);
  CHECK_THROWS_AS(parse_region("0:1:0:x", 4, 4), UsageError);
  CHECK_THROWS_AS(parse_region("1:0:0:1", 4, 4), UsageError);
}

TEST_CASE("run configuration bounds") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.tol = 1e-15;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = {};
  c.tol = 0.1;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = {};
  c.y_max = 2000.0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = {};
  c.threads = -1;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = {};
  c.tol = 1e-6;
  CHECK(c.quadrature().tol == 1e-6);
}

TEST_CASE("sample point sets") {
  const auto route = route_sample_points();
  REQUIRE(route.size() == 20);
  for (const Complex& z : route) {
    CHECK(std::abs(z.real()) <= 1.0);
    CHECK(std::abs(z.imag()) <= 60.0);
  }
  const auto cr = cr_sample_points();
  REQUIRE(cr.size() == 10);
  CHECK(cr.front() == Complex(-0.9, 3.0));
  CHECK(cr.back() == Complex(0.9, 57.0));
}

TEST_CASE("report formatting and pass logic") {
  VerifyReport r;
  r.checks.push_back({"alpha", "pass", 1e-13, 1e-12, "a = b", "fine"});
  r.checks.push_back({"beta", "advisory", 3.0, 0.0, "c = d", ""});
  CHECK(r.passed());
  const std::string text = r.text();
  CHECK(text.find("PASS  alpha  measured=1e-13  threshold=1e-12  [a = b]") != std::string::npos);
  CHECK(text.find("INFO  beta") != std::string::npos);
  CHECK(text.find("2 checks: 1 pass, 0 fail, 1 advisory") != std::string::npos);
  r.checks.push_back({"gamma", "fail", std::numeric_limits<double>::infinity(), 1.0, "e", ""});
  CHECK_FALSE(r.passed());
  const auto j = nlohmann::json::parse(r.json());
  CHECK(j["passed"] == false);
  CHECK(j["checks"][2]["measured"].is_null());
  CHECK(j["checks"][0]["name"] == "alpha");
}

TEST_CASE("help and usage errors") {
  CHECK(invoke({"--help"}).code == kOk);
  CHECK(invoke({}).code == kUsage);
  CHECK(invoke({"frobnicate"}).code == kUsage);
  CHECK(invoke({"--tol", "1e-20", "zeros"}).code == kUsage);
  CHECK(invoke({"--tol", "abc", "zeros"}).code == kUsage);
  CHECK(invoke({"--format", "xml", "eval", "--z", "1"}).code == kUsage);
  CHECK(invoke({"eval"}).code == kUsage);
  const Outcome bad = invoke({"eval", "--z", "1+2j"});
  CHECK(bad.code == kUsage);
  CHECK(bad.err.find("cannot parse complex literal") != std::string::npos);
  CHECK(invoke({"--region", "0:1:5", "map"}).code == kUsage);
  CHECK(invoke({"pq", "--y", "2"}).code == kUsage);
}

TEST_CASE("eval prints all three routes in agreement") {
  const Outcome o = invoke({"--format", "json", "eval", "--z", "0.4+10i"});
  REQUIRE(o.code == kOk);
  const auto j = nlohmann::json::parse(o.out);
  REQUIRE(j.size() == 3);
  CHECK(j[0]["route"] == "via_G");
  CHECK(j[2]["route"] == "oracle_xi");
  CHECK(std::abs(j[0]["re"].get<double>() - 0.27552016666804472914) < 1e-12);
  for (const auto& row : j) CHECK(row["delta_vs_G"].get<double>() < 1e-9);
  const Outcome csv = invoke({"eval", "--z", "1"});
  CHECK(csv.out.rfind("route,re,im,bound,delta_vs_G\nvia_G,0.5", 0) == 0);
}

TEST_CASE("eval batch from a points file") {
  const auto dir = scratch("batch");
  {
    std::ofstream f(dir / "pts.csv");
    f << "x,y\n0,0\n1,0\n0.5,20\n";
  }
  const Outcome o = invoke({"eval", "--in", (dir / "pts.csv").string()});
  REQUIRE(o.code == kOk);
  CHECK(o.out.rfind("x,y,u,v,bound\n", 0) == 0);
  CHECK(std::count(o.out.begin(), o.out.end(), '\n') == 4);
  CHECK(invoke({"eval", "--in", (dir / "missing.csv").string()}).code == kIo);
  std::filesystem::remove_all(dir);
}

TEST_CASE("zeros below 51 and the pq table") {
  const Outcome z = invoke({"--y-max", "51", "zeros"});
  REQUIRE(z.code == kOk);
  CHECK(z.out.rfind("y,t_zeta,residual,u_deriv,simple\n28.26945028", 0) == 0);
  CHECK(std::count(z.out.begin(), z.out.end(), '\n') == 4);
  const Outcome p = invoke({"--format", "json", "pq", "--y", "50,100"});
  REQUIRE(p.code == kOk);
  const auto j = nlohmann::json::parse(p.out);
  REQUIRE(j.size() == 2);
  CHECK(std::abs(j[1]["scaled_p"].get<double>() - 1.0) < 0.05);
}

TEST_CASE("config file, flag precedence and output files") {
  const auto dir = scratch("config");
  {
    std::ofstream f(dir / "c.json");
    f << R"({"y_max": 30, "format": "json", "step": 0.5})";
  }
  const auto out = dir / "zeros.json";
  const Outcome o = invoke({"--config", (dir / "c.json").string(), "--y-max", "45", "--out", out.string(), "zeros"});
  REQUIRE(o.code == kOk);
  CHECK(o.out.empty());
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j.size() == 2);
  {
    std::ofstream f(dir / "bad.json");
    f << R"({"nonsense": 1})";
  }
  CHECK(invoke({"--config", (dir / "bad.json").string(), "zeros"}).code == kUsage);
  {
    std::ofstream f(dir / "broken.json");
    f << "{";
  }
  CHECK(invoke({"--config", (dir / "broken.json").string(), "zeros"}).code == kUsage);
  CHECK(invoke({"--config", (dir / "none.json").string(), "zeros"}).code == kIo);
  CHECK(invoke({"--out", (dir / "no" / "such" / "file").string(), "eval", "--z", "1"}).code == kIo);
  std::filesystem::remove_all(dir);
}

TEST_CASE("map writes its artifacts and reports a clean small strip") {
  const auto dir = scratch("map");
  const Outcome o = invoke({"--region", "0:1:0:46", "--nx", "16", "--ny", "128", "--out", dir.string(), "map"});
  REQUIRE(o.code == kOk);
  for (const char* name : {"grid.csv", "curves.csv", "anomalies.csv", "stationary.csv"}) {
    CHECK(std::filesystem::exists(dir / name));
  }
  CHECK(o.out.find("anomalies 0") != std::string::npos);
  CHECK(slurp(dir / "stationary.csv").find("negative_min") != std::string::npos);
  const Outcome again =
      invoke({"--threads", "1", "--region", "0:1:0:46", "--nx", "16", "--ny", "128", "--out", dir.string(), "map"});
  CHECK(again.out == o.out);
  std::filesystem::remove_all(dir);
}

TEST_CASE("oracle-compare covers the sample set") {
  const Outcome o = invoke({"--format", "json", "oracle-compare"});
  REQUIRE(o.code == kOk);
  const auto j = nlohmann::json::parse(o.out);
  REQUIRE(j.size() == 20);
  for (const auto& row : j) CHECK(row["max_delta"].get<double>() < 1e-9);
}
