#include "xilab/cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "xilab/critical_line.hpp"
#include "xilab/errors.hpp"

namespace xilab::cli {
namespace {

bool parse_number(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

// Flag values as parsed; unset ones leave the config untouched.
struct Flags {
  std::string config_path;
  double tol = 0.0;
  double y_max = 0.0;
  double step = 0.0;
  std::string region;
  int nx = 0;
  int ny = 0;
  std::string format;
  std::string out;
  int threads = 0;
  std::string z;
  std::string in;
  std::vector<double> ys;
};

void apply_json(RunConfig& c, const nlohmann::json& j, std::string& z, std::vector<double>& ys) {
  if (!j.is_object()) throw UsageError("config: top level must be an object");
  int nx = c.region.nx;
  int ny = c.region.ny;
  std::optional<std::string> region;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "tol") c.tol = value.get<double>();
      else if (key == "y_max") c.y_max = value.get<double>();
      else if (key == "step") c.step = value.get<double>();
      else if (key == "region") region = value.get<std::string>();
      else if (key == "nx") nx = value.get<int>();
      else if (key == "ny") ny = value.get<int>();
      else if (key == "format") c.output_format = parse_format(value.get<std::string>());
      else if (key == "out") c.output_path = value.get<std::string>();
      else if (key == "threads") c.threads = value.get<int>();
      else if (key == "z") z = value.get<std::string>();
      else if (key == "y") ys = value.get<std::vector<double>>();
      else throw UsageError("config: unknown key '" + key + "'");
    } catch (const nlohmann::json::exception&) {
      throw UsageError("config: key '" + key + "' has the wrong type");
    }
  }
  if (region) {
    c.region = parse_region(*region, nx, ny);
  } else {
    c.region.nx = nx;
    c.region.ny = ny;
  }
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output_path.empty()) {
    out << text;
  } else {
    write_text(c.output_path, text);
  }
}

int cmd_eval(const RunConfig& c, const Flags& f, std::ostream& out) {
  const QuadratureSpec spec = c.quadrature();
  if (!f.in.empty()) {
    std::ifstream file(f.in);
    if (!file) throw IoError("cannot read '" + f.in + "'");
    const std::vector<Complex> points = read_points(file);
    const std::vector<PointRow> rows = uv_batch(points, spec, c.threads);
    emit(c, uv_table(rows, c.output_format), out);
    return kOk;
  }
  if (f.z.empty()) throw UsageError("eval: --z or --in is required");
  const Complex z = parse_complex(f.z);
  const EvalResult g = eta(z, spec, Route::via_G);
  const EvalResult fr = eta(z, spec, Route::via_F);
  const EvalResult o = xi_oracle(transform(z, Direction::z_to_s), spec);
  struct Row {
    const char* route;
    EvalResult r;
  };
  const Row rows[] = {{"via_G", g}, {"via_F", fr}, {"oracle_xi", o}};
  std::string text;
  if (c.output_format == Format::json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Row& r : rows) {
      arr.push_back({{"route", r.route},
                     {"re", r.r.value.real()},
                     {"im", r.r.value.imag()},
                     {"bound", r.r.abs_error_bound},
                     {"delta_vs_G", std::abs(r.r.value - g.value)}});
    }
    text = arr.dump(2) + "\n";
  } else {
    text = "route,re,im,bound,delta_vs_G\n";
    for (const Row& r : rows) {
      text += std::string(r.route) + "," + format_number(r.r.value.real()) + "," + format_number(r.r.value.imag()) +
              "," + format_number(r.r.abs_error_bound) + "," + format_number(std::abs(r.r.value - g.value)) + "\n";
    }
  }
  emit(c, text, out);
  return kOk;
}

int cmd_zeros(const RunConfig& c, std::ostream& out) {
  LineOptions options;
  options.spec = c.quadrature();
  options.threads = c.threads;
  // Zero locations are refined at least to 1e-8 whatever the quadrature tolerance.
  const double refine_tol = std::min(c.tol, 1e-8);
  const std::vector<ZeroRecord> zeros = scan_zeros(0.0, c.y_max, c.step, refine_tol, options);
  emit(c, zeros_table(zeros, c.output_format), out);
  for (const ZeroRecord& z : zeros) {
    if (!z.simple) return kFailed;
  }
  return kOk;
}

int cmd_pq(const RunConfig& c, const Flags& f, std::ostream& out) {
  std::vector<double> ys = f.ys;
  if (ys.empty()) {
    for (int k = 0; k <= 38; ++k) ys.push_back(10.0 + 5.0 * k);
  }
  const std::vector<PQRow> rows = pq_table(ys, 0, PQPolicy{}, c.threads);
  emit(c, pq_table_text(rows, c.output_format), out);
  return kOk;
}

int cmd_map(const RunConfig& c, std::ostream& out) {
  const std::filesystem::path dir = c.output_path.empty() ? std::filesystem::path("xilab_map") : std::filesystem::path(c.output_path);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");

  const Region& r = c.region;
  const QuadratureSpec spec = c.quadrature();
  const StripGrid strip = evaluate_strip(r, spec, c.threads);
  const SignGrid v = sign_grid(strip, Field::v);
  std::vector<Curve> curves = trace_curves(v, 1e-10, spec, c.threads);
  LineOptions line;
  line.spec = spec;
  line.threads = c.threads;
  const std::vector<StationaryPoint> anchors = stationary_points(r.y_min, r.y_max, 0.5, 1e-10, line);
  attach_anchors(curves, r, anchors);
  const std::vector<Anomaly> anomalies = anomaly_scan(curves, v);

  const std::string ext = c.output_format == Format::json ? ".json" : ".csv";
  write_text(dir / ("grid" + ext), grid_table(strip, c.output_format));
  write_text(dir / ("curves" + ext), curves_table(curves, c.output_format));
  write_text(dir / ("anomalies" + ext), anomalies_table(anomalies, c.output_format));
  write_text(dir / ("stationary" + ext), stationary_table(anchors, c.output_format));

  std::ostringstream s;
  s << "region " << format_number(r.x_min) << ":" << format_number(r.x_max) << ":" << format_number(r.y_min) << ":"
    << format_number(r.y_max) << " " << r.nx << "x" << r.ny << "\n";
  const ModulusMinimum m = off_line_min_modulus(strip, 0.0);
  s << "min_modulus " << format_number(m.min_mod) << " at " << format_number(m.x) << "," << format_number(m.y)
    << " bound " << format_number(m.bound) << "\n";
  if (r.nx > 1 && r.x(1) > 0.0) {
    const EpsilonBand band = epsilon_band(strip);
    s << "epsilon_band x " << format_number(band.x) << " min |v|/x " << format_number(band.min_slope) << " at y "
      << format_number(band.y_at_min) << "\n";
  }
  s << "curves " << curves.size() << "\n";
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const CurveAudit a = curve_audit(curves[k]);
    s << "  curve " << k << " points " << curves[k].points.size() << " u_sign " << a.u_sign << " u_min_abs "
      << format_number(a.u_min_abs) << " anchor "
      << (curves[k].start_anchor ? to_string(curves[k].start_anchor->kind) : "none")
      << (curves[k].flagged ? " flagged" : "") << "\n";
  }
  s << "anomalies " << anomalies.size() << "\n";
  for (const Anomaly& a : anomalies) {
    s << "  " << to_string(a.kind) << " at " << format_number(a.x) << "," << format_number(a.y) << "\n";
  }
  out << s.str();
  return anomalies.empty() ? kOk : kAnomaly;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const VerifyReport report = run_verify(c);
  if (c.output_format == Format::json) {
    out << report.json();
  } else {
    out << report.text();
  }
  if (!c.output_path.empty()) write_text(c.output_path, report.json());
  return report.passed() ? kOk : kFailed;
}

int cmd_oracle_compare(const RunConfig& c, const Flags& f, std::ostream& out) {
  std::vector<Complex> points;
  if (!f.in.empty()) {
    std::ifstream file(f.in);
    if (!file) throw IoError("cannot read '" + f.in + "'");
    points = read_points(file);
  } else {
    points = route_sample_points();
  }
  const QuadratureSpec spec = c.quadrature();
  struct Row {
    Complex z;
    EvalResult g, f, o;
  };
  std::vector<Row> rows(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    rows[k].z = points[k];
    rows[k].g = eta(points[k], spec, Route::via_G);
    rows[k].f = eta(points[k], spec, Route::via_F);
    rows[k].o = xi_oracle(transform(points[k], Direction::z_to_s), spec);
  }
  const auto max_delta = [](const Row& r) {
    return std::max({std::abs(r.g.value - r.f.value), std::abs(r.g.value - r.o.value), std::abs(r.f.value - r.o.value)});
  };
  std::string text;
  if (c.output_format == Format::json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Row& r : rows) {
      arr.push_back({{"x", r.z.real()},
                     {"y", r.z.imag()},
                     {"via_G", {r.g.value.real(), r.g.value.imag(), r.g.abs_error_bound}},
                     {"via_F", {r.f.value.real(), r.f.value.imag(), r.f.abs_error_bound}},
                     {"oracle_xi", {r.o.value.real(), r.o.value.imag(), r.o.abs_error_bound}},
                     {"max_delta", max_delta(r)}});
    }
    text = arr.dump(2) + "\n";
  } else {
    text = "x,y,g_re,g_im,g_bound,f_re,f_im,f_bound,o_re,o_im,o_bound,max_delta\n";
    for (const Row& r : rows) {
      for (const double v : {r.z.real(), r.z.imag(), r.g.value.real(), r.g.value.imag(), r.g.abs_error_bound,
                             r.f.value.real(), r.f.value.imag(), r.f.abs_error_bound, r.o.value.real(),
                             r.o.value.imag(), r.o.abs_error_bound}) {
        text += format_number(v) + ",";
      }
      text += format_number(max_delta(r)) + "\n";
    }
  }
  emit(c, text, out);
  return kOk;
}

}  // namespace

void RunConfig::validate() const {
  if (!(tol >= 1e-14 && tol <= 1e-2)) throw UsageError("tol must lie in [1e-14, 1e-2]");
  if (!(y_max > 0.0 && y_max <= 1000.0)) throw UsageError("y_max must lie in (0, 1000]");
  if (!(step > 0.0) || !std::isfinite(step)) throw UsageError("step must be positive");
  if (threads < 0) throw UsageError("threads must be >= 0");
  region.validate();
}

QuadratureSpec RunConfig::quadrature() const {
  QuadratureSpec spec;
  spec.tol = tol;
  return spec;
}

Complex parse_complex(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (ch != ' ' && ch != '\t') s += ch;
  }
  const auto bad = [&] { return UsageError("cannot parse complex literal '" + std::string(text) + "'"); };
  if (s.empty()) throw bad();
  if (s.back() != 'i') {
    double re = 0.0;
    if (!parse_number(s, re)) throw bad();
    return {re, 0.0};
  }
  s.pop_back();
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  double re = 0.0;
  double im = 0.0;
  std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
  std::string im_part = split == std::string::npos ? s : s.substr(split);
  if (im_part == "+" || im_part == "-" || im_part.empty()) im_part += "1";
  if (!re_part.empty() && !parse_number(re_part, re)) throw bad();
  if (!parse_number(im_part, im)) throw bad();
  if (!std::isfinite(re) || !std::isfinite(im)) throw bad();
  return {re, im};
}

Region parse_region(std::string_view text, int nx, int ny) {
  double v[4];
  std::size_t start = 0;
  for (int k = 0; k < 4; ++k) {
    const std::size_t end = k < 3 ? text.find(':', start) : text.size();
    if (end == std::string_view::npos || !parse_number(text.substr(start, end - start), v[k])) {
      throw UsageError("region must look like x0:x1:y0:y1");
    }
    start = end + 1;
  }
  Region r{v[0], v[1], v[2], v[3], nx, ny};
  r.validate();
  return r;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"xi-function numerics: evaluation, zeros, p/q tables, strip maps and verification"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  auto* o_config = app.add_option("--config", f.config_path, "JSON file with flat keys mirroring the flags");
  auto* o_tol = app.add_option("--tol", f.tol, "quadrature tolerance in [1e-14, 1e-2]");
  auto* o_threads = app.add_option("--threads", f.threads, "worker threads (0 = all cores)")->envname("XILAB_THREADS");
  auto* o_format = app.add_option("--format", f.format, "csv or json");
  auto* o_out = app.add_option("--out", f.out, "output file (map: directory)");
  auto* o_ymax = app.add_option("--y-max", f.y_max, "upper end of the y scan");
  auto* o_step = app.add_option("--step", f.step, "scan step in y");
  auto* o_region = app.add_option("--region", f.region, "x0:x1:y0:y1");
  auto* o_nx = app.add_option("--nx", f.nx, "grid columns");
  auto* o_ny = app.add_option("--ny", f.ny, "grid rows");

  auto* eval = app.add_subcommand("eval", "eta(z) on all three routes, or a batch of points");
  auto* o_z = eval->add_option("--z", f.z, "complex literal a+bi");
  eval->add_option("--in", f.in, "CSV (x,y) or JSON points file");
  app.add_subcommand("zeros", "zeros of u(0, y) on (0, y_max]");
  auto* pq_cmd = app.add_subcommand("pq", "p(y), q(y) table");
  auto* o_y = pq_cmd->add_option("--y", f.ys, "y values (repeat or comma-separate)")->delimiter(',');
  app.add_subcommand("map", "sign grid, v = 0 curves and anomaly report");
  app.add_subcommand("verify", "run every acceptance check");
  auto* compare = app.add_subcommand("oracle-compare", "route agreement table");
  compare->add_option("--in", f.in, "CSV (x,y) or JSON points file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kUsage;
  }

  try {
    RunConfig c;
    std::string z_from_file;
    std::vector<double> ys_from_file;
    if (o_config->count() > 0) {
      std::ifstream file(f.config_path);
      if (!file) throw IoError("cannot read config '" + f.config_path + "'");
      const nlohmann::json j = nlohmann::json::parse(file, nullptr, false);
      if (j.is_discarded()) throw UsageError("config: malformed JSON");
      apply_json(c, j, z_from_file, ys_from_file);
    }
    if (o_tol->count() > 0) c.tol = f.tol;
    if (o_threads->count() > 0) c.threads = f.threads;
    if (o_format->count() > 0) c.output_format = parse_format(f.format);
    if (o_out->count() > 0) c.output_path = f.out;
    if (o_ymax->count() > 0) c.y_max = f.y_max;
    if (o_step->count() > 0) c.step = f.step;
    if (o_nx->count() > 0) c.region.nx = f.nx;
    if (o_ny->count() > 0) c.region.ny = f.ny;
    if (o_region->count() > 0) c.region = parse_region(f.region, c.region.nx, c.region.ny);
    if (o_z->count() == 0 && !z_from_file.empty()) f.z = z_from_file;
    if (o_y->count() == 0 && !ys_from_file.empty()) f.ys = ys_from_file;
    c.validate();

    const CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "eval") return cmd_eval(c, f, out);
    if (name == "zeros") return cmd_zeros(c, out);
    if (name == "pq") return cmd_pq(c, f, out);
    if (name == "map") return cmd_map(c, out);
    if (name == "verify") return cmd_verify(c, out);
    return cmd_oracle_compare(c, f, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << " (best " << format_number(e.best_value()) << " +- "
        << format_number(e.best_bound()) << ")\n";
    return kConvergence;
  } catch (const CoverageError& e) {
    err << "coverage error: " << e.what() << " (tail " << format_number(e.partial_tail_bound()) << ")\n";
    return kConvergence;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  }
}

}  // namespace xilab::cli
