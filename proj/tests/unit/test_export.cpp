#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "xilab/errors.hpp"
#include "xilab/export.hpp"

using namespace xilab;

TEST_CASE("numbers round-trip in shortest form") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(-3.0) == "-3");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  for (double v : {0.1, 1.0 / 3.0, 28.2694502834694, 6.0707e-16}) CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("format names") {
  CHECK(parse_format("csv") == Format::csv);
  CHECK(parse_format("json") == Format::json);
  CHECK_THROWS_AS(parse_format("xml"), UsageError);
}

TEST_CASE("uv table in both formats") {
  const std::vector<PointRow> rows{{0.1, 2.0, 0.25, -0.5, 1e-12}};
  CHECK(uv_table(rows, Format::csv) == "x,y,u,v,bound\n0.1,2,0.25,-0.5,1e-12\n");
  const auto j = nlohmann::json::parse(uv_table(rows, Format::json));
  REQUIRE(j.size() == 1);
  CHECK(j[0]["v"].get<double>() == -0.5);
  const std::string raw = uv_table(rows, Format::json);
  CHECK(raw.find("\"x\"") < raw.find("\"bound\""));
}

TEST_CASE("non-finite values become null in JSON") {
  const std::vector<PointRow> rows{{0.0, 0.0, std::nan(""), 1.0, 0.0}};
  const auto j = nlohmann::json::parse(uv_table(rows, Format::json));
  CHECK(j[0]["u"].is_null());
  CHECK(uv_table(rows, Format::csv).find("nan") != std::string::npos);
}

TEST_CASE("zero, stationary and pq tables") {
  ZeroRecord z;
  z.y = 28.5;
  z.t_zeta = 14.25;
  z.residual = 1e-20;
  z.u_deriv = 7e-4;
  z.simple = true;
  CHECK(zeros_table(std::vector{z}, Format::csv) == "y,t_zeta,residual,u_deriv,simple\n28.5,14.25,1e-20,7e-04,true\n");
  StationaryPoint s;
  s.y_m = 31.0;
  s.u_value = -0.01;
  s.curvature = 2.0;
  s.kind = StationaryKind::negative_min;
  CHECK(stationary_table(std::vector{s}, Format::csv) ==
        "y_m,u_value,u_deriv,curvature,kind\n31,-0.01,0,2,negative_min\n");
  PQRow r;
  r.value.y = 100.0;
  r.value.p = 0.01;
  r.value.q = 0.005;
  r.value.diff = 0.005;
  r.scaled_p = 1.001;
  const auto j = nlohmann::json::parse(pq_table_text(std::vector{r}, Format::json));
  CHECK(j[0]["scaled_p"].get<double>() == 1.001);
}

TEST_CASE("grid and curve tables") {
  StripGrid strip;
  strip.region = Region{0.0, 1.0, 0.0, 1.0, 2, 2};
  strip.nodes = {UVValue{{1.0, 0.0}, {0.0, 0.0}}, UVValue{{-1.0, 0.0}, {2.0, 0.0}},
                 UVValue{{0.5, 0.0}, {-2.0, 0.0}}, UVValue{{1e-30, 1e-20}, {1.0, 0.0}}};
  const std::string csv = grid_table(strip, Format::csv);
  CHECK(csv == "x,y,u,v,sign_u,sign_v\n0,0,1,0,1,0\n1,0,-1,2,-1,1\n0,1,0.5,-2,1,-1\n1,1,1e-30,1,0,1\n");
  const auto j = nlohmann::json::parse(grid_table(strip, Format::json));
  CHECK(j["region"]["nx"] == 2);
  CHECK(j["sign_u"][1][1] == 0);
  CHECK(j["sign_v"][1][0] == -1);

  Curve c;
  c.points = {{0.1, 1.0}, {0.2, 1.5}};
  c.u_values = {-1.0, -2.0};
  c.v_values = {0.0, 1e-18};
  c.u_sign = -1;
  CHECK(curves_table(std::vector{c}, Format::csv) == "curve_id,x,y,u,v\n0,0.1,1,-1,0\n0,0.2,1.5,-2,1e-18\n");
  const auto cj = nlohmann::json::parse(curves_table(std::vector{c}, Format::json));
  CHECK(cj[0]["anchor_y"].is_null());
  CHECK(cj[0]["points"].size() == 2);

  Anomaly a;
  a.kind = AnomalyKind::join;
  a.curve_a = 0;
  a.curve_b = 1;
  a.distance_cells = 0.5;
  CHECK(anomalies_table(std::vector{a}, Format::csv).rfind("kind,x,y,curve_a,curve_b,distance_cells,u\njoin,", 0) == 0);
}

TEST_CASE("reading points from CSV and JSON") {
  std::istringstream csv("x,y\n0.1, 2\n# comment\n\n-0.5,30,extra\n");
  const auto a = read_points(csv);
  REQUIRE(a.size() == 2);
  CHECK(a[1] == Complex(-0.5, 30.0));
  std::istringstream headerless("1,2\n");
  CHECK(read_points(headerless).size() == 1);
  std::istringstream json(R"([{"x": 0.25, "y": 4}, {"x": 1, "y": 0}])");
  const auto b = read_points(json);
  REQUIRE(b.size() == 2);
  CHECK(b[0] == Complex(0.25, 4.0));
  std::istringstream bad_line("1,2\nfoo,bar\n");
  CHECK_THROWS_AS(read_points(bad_line), UsageError);
  std::istringstream no_comma("1 2\n");
  CHECK_THROWS_AS(read_points(no_comma), UsageError);
  std::istringstream bad_json(R"([{"x": 1}])");
  CHECK_THROWS_AS(read_points(bad_json), UsageError);
  std::istringstream broken_json("[1,");
  CHECK_THROWS_AS(read_points(broken_json), UsageError);
}

TEST_CASE("write_text replaces files and reports failures") {
  const auto dir = std::filesystem::temp_directory_path() / "xilab_export_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";
  write_text(path, "first\n");
  write_text(path, "second\n");
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "second");
  CHECK_THROWS_AS(write_text(dir / "missing" / "out.txt", "x"), IoError);
  std::filesystem::remove_all(dir);
}
