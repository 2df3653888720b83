#include "xilab/export.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "xilab/errors.hpp"

namespace xilab {
namespace {

using ojson = nlohmann::ordered_json;

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

// Rows of already formatted cells joined by commas.
class Csv {
 public:
  explicit Csv(std::string_view header) : text_(header) { text_ += '\n'; }

  Csv& cell(std::string_view s) {
    if (!first_) text_ += ',';
    text_ += s;
    first_ = false;
    return *this;
  }
  Csv& num(double v) { return cell(format_number(v)); }
  Csv& integer(long long v) { return cell(std::to_string(v)); }
  Csv& flag(bool v) { return cell(v ? "true" : "false"); }
  void end() {
    text_ += '\n';
    first_ = true;
  }
  std::string str() && { return std::move(text_); }

 private:
  std::string text_;
  bool first_ = true;
};

ojson number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

bool parse_double(std::string_view s, double& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw UsageError("unknown format '" + std::string(text) + "' (expected csv or json)");
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string uv_table(std::span<const PointRow> rows, Format format) {
  if (format == Format::json) {
    ojson arr = ojson::array();
    for (const PointRow& r : rows) {
      arr.push_back({{"x", number(r.x)}, {"y", number(r.y)}, {"u", number(r.u)}, {"v", number(r.v)},
                     {"bound", number(r.bound)}});
    }
    return dump(arr);
  }
  Csv csv("x,y,u,v,bound");
  for (const PointRow& r : rows) {
    csv.num(r.x).num(r.y).num(r.u).num(r.v).num(r.bound).end();
  }
  return std::move(csv).str();
}

std::string zeros_table(std::span<const ZeroRecord> zeros, Format format) {
  if (format == Format::json) {
    ojson arr = ojson::array();
    for (const ZeroRecord& z : zeros) {
      arr.push_back({{"y", number(z.y)},
                     {"t_zeta", number(z.t_zeta)},
                     {"residual", number(z.residual)},
                     {"u_deriv", number(z.u_deriv)},
                     {"simple", z.simple}});
    }
    return dump(arr);
  }
  Csv csv("y,t_zeta,residual,u_deriv,simple");
  for (const ZeroRecord& z : zeros) csv.num(z.y).num(z.t_zeta).num(z.residual).num(z.u_deriv).flag(z.simple).end();
  return std::move(csv).str();
}

std::string stationary_table(std::span<const StationaryPoint> points, Format format) {
  if (format == Format::json) {
    ojson arr = ojson::array();
    for (const StationaryPoint& s : points) {
      arr.push_back({{"y_m", number(s.y_m)},
                     {"u_value", number(s.u_value)},
                     {"u_deriv", number(s.u_deriv)},
                     {"curvature", number(s.curvature)},
                     {"kind", to_string(s.kind)}});
    }
    return dump(arr);
  }
  Csv csv("y_m,u_value,u_deriv,curvature,kind");
  for (const StationaryPoint& s : points) {
    csv.num(s.y_m).num(s.u_value).num(s.u_deriv).num(s.curvature).cell(to_string(s.kind)).end();
  }
  return std::move(csv).str();
}

std::string pq_table_text(std::span<const PQRow> rows, Format format) {
  if (format == Format::json) {
    ojson arr = ojson::array();
    for (const PQRow& r : rows) {
      arr.push_back({{"y", number(r.value.y)},
                     {"p", number(r.value.p)},
                     {"q", number(r.value.q)},
                     {"diff", number(r.value.diff)},
                     {"scaled_p", number(r.scaled_p)}});
    }
    return dump(arr);
  }
  Csv csv("y,p,q,diff,scaled_p");
  for (const PQRow& r : rows) csv.num(r.value.y).num(r.value.p).num(r.value.q).num(r.value.diff).num(r.scaled_p).end();
  return std::move(csv).str();
}

std::string grid_table(const StripGrid& strip, Format format) {
  const Region& r = strip.region;
  const SignGrid su = sign_grid(strip, Field::u);
  const SignGrid sv = sign_grid(strip, Field::v);
  if (format == Format::json) {
    ojson j;
    j["region"] = {{"x_min", r.x_min}, {"x_max", r.x_max}, {"y_min", r.y_min},
                   {"y_max", r.y_max}, {"nx", r.nx},       {"ny", r.ny}};
    ojson mu = ojson::array();
    ojson mv = ojson::array();
    for (int jy = 0; jy < r.ny; ++jy) {
      ojson ru = ojson::array();
      ojson rv = ojson::array();
      for (int i = 0; i < r.nx; ++i) {
        ru.push_back(su.sign(i, jy));
        rv.push_back(sv.sign(i, jy));
      }
      mu.push_back(std::move(ru));
      mv.push_back(std::move(rv));
    }
    j["sign_u"] = std::move(mu);
    j["sign_v"] = std::move(mv);
    return j.dump() + "\n";
  }
  Csv csv("x,y,u,v,sign_u,sign_v");
  for (int jy = 0; jy < r.ny; ++jy) {
    for (int i = 0; i < r.nx; ++i) {
      const UVValue& n = strip.at(i, jy);
      csv.num(r.x(i)).num(r.y(jy)).num(n.u.value).num(n.v.value).integer(su.sign(i, jy)).integer(sv.sign(i, jy)).end();
    }
  }
  return std::move(csv).str();
}

std::string curves_table(std::span<const Curve> curves, Format format) {
  if (format == Format::json) {
    ojson arr = ojson::array();
    for (std::size_t c = 0; c < curves.size(); ++c) {
      const Curve& cv = curves[c];
      ojson pts = ojson::array();
      for (std::size_t k = 0; k < cv.points.size(); ++k) {
        pts.push_back({{"x", number(cv.points[k].x)},
                       {"y", number(cv.points[k].y)},
                       {"u", number(cv.u_values[k])},
                       {"v", number(cv.v_values[k])}});
      }
      ojson entry = {{"curve_id", c},
                     {"u_sign", cv.u_sign},
                     {"u_min_abs", number(cv.u_min_abs)},
                     {"v_residual_max", number(cv.v_residual_max)},
                     {"closed", cv.closed},
                     {"flagged", cv.flagged}};
      entry["anchor_y"] = cv.start_anchor ? number(cv.start_anchor->y_m) : ojson(nullptr);
      entry["anchor_kind"] = cv.start_anchor ? ojson(to_string(cv.start_anchor->kind)) : ojson(nullptr);
      entry["points"] = std::move(pts);
      arr.push_back(std::move(entry));
    }
    return dump(arr);
  }
  Csv csv("curve_id,x,y,u,v");
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const Curve& cv = curves[c];
    for (std::size_t k = 0; k < cv.points.size(); ++k) {
      csv.integer(static_cast<long long>(c)).num(cv.points[k].x).num(cv.points[k].y).num(cv.u_values[k]).num(cv.v_values[k]).end();
    }
  }
  return std::move(csv).str();
}

std::string anomalies_table(std::span<const Anomaly> anomalies, Format format) {
  if (format == Format::json) {
    ojson arr = ojson::array();
    for (const Anomaly& a : anomalies) {
      ojson corners = ojson::array();
      for (double v : a.v_corners) corners.push_back(number(v));
      arr.push_back({{"kind", to_string(a.kind)},
                     {"x", number(a.x)},
                     {"y", number(a.y)},
                     {"curve_a", a.curve_a},
                     {"curve_b", a.curve_b},
                     {"distance_cells", number(a.distance_cells)},
                     {"u", number(a.u)},
                     {"v", std::move(corners)}});
    }
    return dump(arr);
  }
  Csv csv("kind,x,y,curve_a,curve_b,distance_cells,u");
  for (const Anomaly& a : anomalies) {
    csv.cell(to_string(a.kind)).num(a.x).num(a.y).integer(a.curve_a).integer(a.curve_b).num(a.distance_cells).num(a.u).end();
  }
  return std::move(csv).str();
}

std::vector<Complex> read_points(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::vector<Complex> out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    const ojson j = ojson::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_array()) throw UsageError("points: malformed JSON array");
    for (const auto& e : j) {
      if (!e.is_object() || !e.contains("x") || !e.contains("y") || !e["x"].is_number() || !e["y"].is_number()) {
        throw UsageError("points: each JSON entry needs numeric x and y");
      }
      out.emplace_back(e["x"].get<double>(), e["y"].get<double>());
    }
    return out;
  }
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw UsageError("points: line " + std::to_string(line_no) + " has no comma");
    const std::string xs = trim(line.substr(0, comma));
    std::string ys = trim(line.substr(comma + 1));
    if (const auto extra = ys.find(','); extra != std::string::npos) ys = trim(ys.substr(0, extra));
    double x = 0.0;
    double y = 0.0;
    if (!parse_double(xs, x) || !parse_double(ys, y)) {
      if (out.empty() && line_no == 1) continue;  // header
      throw UsageError("points: line " + std::to_string(line_no) + " is not numeric");
    }
    out.emplace_back(x, y);
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace xilab
