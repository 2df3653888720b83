#include "xilab/strip_mapper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "xilab/errors.hpp"
#include "xilab/parallel.hpp"
#include "xilab/root_finding.hpp"

namespace xilab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxRefineIterations = 100;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Edge (i, j, vertical): horizontal joins (i, j)-(i+1, j), vertical joins (i, j)-(i, j+1).
std::int64_t edge_key(const Region& r, int i, int j, bool vertical) {
  return (static_cast<std::int64_t>(j) * r.nx + i) * 2 + (vertical ? 1 : 0);
}

struct EdgeRef {
  int i;
  int j;
  bool vertical;
};

EdgeRef decode(const Region& r, std::int64_t key) {
  const std::int64_t node = key / 2;
  return {static_cast<int>(node % r.nx), static_cast<int>(node / r.nx), (key % 2) == 1};
}

std::vector<double> axis(int n, const std::function<double(int)>& at) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = at(k);
  return out;
}

bool is_saddle(const SignGrid& g, int i, int j) {
  const int s0 = sign_of(g.value(i, j));
  const int s1 = sign_of(g.value(i + 1, j));
  const int s2 = sign_of(g.value(i + 1, j + 1));
  const int s3 = sign_of(g.value(i, j + 1));
  return s0 != 0 && s1 != 0 && s2 != 0 && s3 != 0 && s0 == s2 && s1 == s3 && s0 != s1;
}

// Cells (up to two) sharing an edge.
std::vector<std::pair<int, int>> edge_cells(const Region& r, const EdgeRef& e) {
  std::vector<std::pair<int, int>> cells;
  if (e.vertical) {
    if (e.i >= 1) cells.emplace_back(e.i - 1, e.j);
    if (e.i <= r.nx - 2) cells.emplace_back(e.i, e.j);
  } else {
    if (e.j >= 1) cells.emplace_back(e.i, e.j - 1);
    if (e.j <= r.ny - 2) cells.emplace_back(e.i, e.j);
  }
  return cells;
}

}  // namespace

void Region::validate() const {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) || !std::isfinite(y_max)) {
    throw UsageError("region: bounds must be finite");
  }
  if (x_min < 0.0) throw UsageError("region: x_min must be >= 0 (use symmetry for x < 0)");
  if (x_max > 2.0) throw UsageError("region: x_max must be <= 2");
  if (!(x_min < x_max) || !(y_min < y_max)) throw UsageError("region: empty extent");
  if (y_min < 0.0) throw UsageError("region: y_min must be >= 0 (use symmetry for y < 0)");
  if (nx < 2 || ny < 2) throw UsageError("region: nx and ny must be >= 2");
}

StripGrid evaluate_strip(const Region& region, const QuadratureSpec& spec, int threads) {
  region.validate();
  const std::vector<double> xs = axis(region.nx, [&](int i) { return region.x(i); });
  const std::vector<double> ys = axis(region.ny, [&](int j) { return region.y(j); });
  StripGrid out{region, {}};
  try {
    const KernelQuadrature quad(Kernel::G, region.x_max, region.y_max, spec);
    out.nodes = quad.uv_grid(xs, ys, threads);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError("grid node (" + std::to_string(region.x_max) + ", " + std::to_string(region.y_max) +
                               "): " + e.what(),
                           e.best_value(), e.best_bound());
  }
  return out;
}

SignGrid make_sign_grid(const Region& region, Field field, std::vector<double> values, std::vector<double> bounds) {
  region.validate();
  const auto n = static_cast<std::size_t>(region.nx) * static_cast<std::size_t>(region.ny);
  if (values.size() != n || bounds.size() != n) throw UsageError("sign grid: value/bound count does not match region");
  SignGrid g;
  g.region = region;
  g.field = field;
  g.signs.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    g.signs[k] = static_cast<std::int8_t>(std::abs(values[k]) <= bounds[k] ? 0 : sign_of(values[k]));
    g.bound = std::max(g.bound, bounds[k]);
  }
  g.values = std::move(values);
  g.bounds = std::move(bounds);
  return g;
}

SignGrid sign_grid(const StripGrid& strip, Field field) {
  std::vector<double> values(strip.nodes.size());
  std::vector<double> bounds(strip.nodes.size());
  for (std::size_t k = 0; k < strip.nodes.size(); ++k) {
    const BoundedReal& b = field == Field::u ? strip.nodes[k].u : strip.nodes[k].v;
    values[k] = b.value;
    bounds[k] = b.bound;
  }
  return make_sign_grid(strip.region, field, std::move(values), std::move(bounds));
}

SignGrid sign_grid(const Region& region, Field field, const QuadratureSpec& spec, int threads) {
  return sign_grid(evaluate_strip(region, spec, threads), field);
}

// ---------------------------------------------------------------------------
// Tracing

std::vector<Curve> trace_curves(const SignGrid& g, double refine_tol, const FieldEvaluator& evaluate, int threads,
                                const LineSampler& line) {
  if (g.field != Field::v) throw UsageError("trace_curves: grid must hold v");
  if (!(refine_tol > 0.0)) throw UsageError("trace_curves: refine_tol must be positive");
  const Region& r = g.region;

  struct Segment {
    std::int64_t a;
    std::int64_t b;
    bool flagged;
  };
  std::vector<Segment> segments;
  for (int j = 0; j + 1 < r.ny; ++j) {
    for (int i = 0; i + 1 < r.nx; ++i) {
      const std::array<int, 4> s = {sign_of(g.value(i, j)), sign_of(g.value(i + 1, j)),
                                    sign_of(g.value(i + 1, j + 1)), sign_of(g.value(i, j + 1))};
      if (s[0] == 0 || s[1] == 0 || s[2] == 0 || s[3] == 0) continue;
      const std::int64_t bottom = edge_key(r, i, j, false);
      const std::int64_t right = edge_key(r, i + 1, j, true);
      const std::int64_t top = edge_key(r, i, j + 1, false);
      const std::int64_t left = edge_key(r, i, j, true);
      std::vector<std::int64_t> crossing;
      if (s[0] != s[1]) crossing.push_back(bottom);
      if (s[1] != s[2]) crossing.push_back(right);
      if (s[3] != s[2]) crossing.push_back(top);
      if (s[0] != s[3]) crossing.push_back(left);
      if (crossing.size() == 2) {
        segments.push_back({crossing[0], crossing[1], false});
      } else if (crossing.size() == 4) {
        const double xc = 0.5 * (r.x(i) + r.x(i + 1));
        const double yc = 0.5 * (r.y(j) + r.y(j + 1));
        const BoundedReal vc = evaluate(xc, yc).v;
        const bool ambiguous = std::abs(vc.value) <= vc.bound;
        if (sign_of(vc.value) == s[0]) {
          segments.push_back({bottom, right, ambiguous});
          segments.push_back({top, left, ambiguous});
        } else {
          segments.push_back({left, bottom, ambiguous});
          segments.push_back({right, top, ambiguous});
        }
      }
    }
  }

  // Unique crossing edges in key order, refined independently.
  std::map<std::int64_t, int> index;
  for (const Segment& s : segments) {
    index.emplace(s.a, 0);
    index.emplace(s.b, 0);
  }
  std::vector<std::int64_t> keys;
  keys.reserve(index.size());
  for (auto& [key, idx] : index) {
    idx = static_cast<int>(keys.size());
    keys.push_back(key);
  }

  struct Crossing {
    CurvePoint p;
    double u;
    double v;
    bool flagged;
  };
  std::vector<Crossing> crossings(keys.size());
  parallel_for(keys.size(), threads, [&](std::size_t k) {
    const EdgeRef e = decode(r, keys[k]);
    const int i1 = e.vertical ? e.i : e.i + 1;
    const int j1 = e.vertical ? e.j + 1 : e.j;
    const double x0 = r.x(e.i);
    const double y0 = r.y(e.j);
    const double x1 = r.x(i1);
    const double y1 = r.y(j1);
    const auto at = [&](double s) { return CurvePoint{x0 + s * (x1 - x0), y0 + s * (y1 - y0)}; };
    std::function<double(double)> along;
    if (line) along = line(e.vertical, e.vertical ? x0 : y0);
    const auto f = [&](double s) {
      const CurvePoint p = at(s);
      if (along) return along(e.vertical ? p.y : p.x);
      return evaluate(p.x, p.y).v.value;
    };
    const BracketedRoot root =
        brent_root(f, 0.0, 1.0, g.value(e.i, e.j), g.value(i1, j1), refine_tol, kMaxRefineIterations);
    const CurvePoint p = at(root.root);
    const UVValue uv = evaluate(p.x, p.y);
    crossings[k] = {p, uv.u.value, uv.v.value, root.iterations >= kMaxRefineIterations};
  });

  struct Link {
    int to;
    bool flagged;
  };
  std::vector<std::vector<Link>> adjacency(keys.size());
  for (const Segment& s : segments) {
    const int a = index.at(s.a);
    const int b = index.at(s.b);
    adjacency[a].push_back({b, s.flagged});
    adjacency[b].push_back({a, s.flagged});
  }

  std::vector<bool> visited(keys.size(), false);
  std::vector<Curve> curves;
  const auto walk = [&](int start, bool closed) {
    Curve c;
    c.closed = closed;
    int prev = -1;
    int cur = start;
    while (cur >= 0 && !visited[cur]) {
      visited[cur] = true;
      c.points.push_back(crossings[cur].p);
      c.u_values.push_back(crossings[cur].u);
      c.v_values.push_back(crossings[cur].v);
      c.edges.push_back(keys[cur]);
      c.flagged = c.flagged || crossings[cur].flagged;
      int next = -1;
      for (const Link& l : adjacency[cur]) {
        if (l.to != prev && !visited[l.to]) {
          next = l.to;
          c.flagged = c.flagged || l.flagged;
          break;
        }
      }
      prev = cur;
      cur = next;
    }
    if (!closed && c.points.size() > 1) {
      const CurvePoint& a = c.points.front();
      const CurvePoint& b = c.points.back();
      if (b.x < a.x || (b.x == a.x && b.y < a.y)) {
        std::reverse(c.points.begin(), c.points.end());
        std::reverse(c.u_values.begin(), c.u_values.end());
        std::reverse(c.v_values.begin(), c.v_values.end());
        std::reverse(c.edges.begin(), c.edges.end());
      }
    }
    c.u_min_abs = std::numeric_limits<double>::infinity();
    bool pos = false;
    bool neg = false;
    for (std::size_t k = 0; k < c.points.size(); ++k) {
      c.v_residual_max = std::max(c.v_residual_max, std::abs(c.v_values[k]));
      c.u_min_abs = std::min(c.u_min_abs, std::abs(c.u_values[k]));
      pos = pos || c.u_values[k] > 0.0;
      neg = neg || c.u_values[k] < 0.0;
    }
    c.u_sign = (pos && !neg) ? 1 : (neg && !pos) ? -1 : 0;
    curves.push_back(std::move(c));
  };
  for (std::size_t k = 0; k < keys.size(); ++k) {
    if (!visited[k] && adjacency[k].size() == 1) walk(static_cast<int>(k), false);
  }
  for (std::size_t k = 0; k < keys.size(); ++k) {
    if (!visited[k]) walk(static_cast<int>(k), true);
  }
  std::stable_sort(curves.begin(), curves.end(), [](const Curve& a, const Curve& b) {
    const CurvePoint& pa = a.points.front();
    const CurvePoint& pb = b.points.front();
    return pa.y != pb.y ? pa.y < pb.y : pa.x < pb.x;
  });
  return curves;
}

std::vector<Curve> trace_curves(const SignGrid& v_grid, double refine_tol, const QuadratureSpec& spec, int threads) {
  const Region& r = v_grid.region;
  const KernelQuadrature quad(Kernel::G, r.x_max, r.y_max, spec);
  return trace_curves(
      v_grid, refine_tol, [&quad](double x, double y) { return quad.uv(x, y); }, threads,
      [&quad](bool vertical, double fixed) { return quad.v_line_sampler(vertical, fixed); });
}

void attach_anchors(std::vector<Curve>& curves, const Region& region, std::span<const StationaryPoint> anchors) {
  const double x_left = region.x_min > 0.0 ? region.x_min : region.x_min + region.dx();
  const double tolerance = std::max(2.0 * region.dy(), 0.1);
  for (Curve& c : curves) {
    c.start_anchor.reset();
    if (c.closed || c.points.empty() || c.points.front().x > x_left + 0.5 * region.dx()) continue;
    const double y = c.points.front().y;
    double best = tolerance;
    for (const StationaryPoint& s : anchors) {
      const double d = std::abs(s.y_m - y);
      if (d <= best) {
        best = d;
        c.start_anchor = s;
      }
    }
  }
}

CurveAudit curve_audit(const Curve& c) {
  CurveAudit a;
  a.u_sign = c.u_sign;
  a.u_sign_constant = c.u_sign != 0;
  a.u_min_abs = c.u_min_abs;
  a.v_residual_max = c.v_residual_max;
  for (std::size_t k = 0; k + 1 < c.points.size(); ++k) {
    const double dx = c.points[k + 1].x - c.points[k].x;
    const int s = dx == 0.0 ? 0 : sign_of((c.u_values[k + 1] - c.u_values[k]) / dx);
    a.du_dx_signs.push_back(s);
    if (s > 0) ++a.increasing;
    if (s < 0) ++a.decreasing;
  }
  a.anchored = c.start_anchor.has_value();
  if (a.anchored) {
    const StationaryKind kind = c.start_anchor->kind;
    const int expected = kind == StationaryKind::positive_max ? 1 : kind == StationaryKind::negative_min ? -1 : 0;
    a.matches_anchor = expected != 0 && c.u_sign == expected;
  }
  return a;
}

ModulusMinimum off_line_min_modulus(const StripGrid& strip, double x_exclusion) {
  if (!(x_exclusion >= 0.0)) throw UsageError("off_line_min_modulus: x_exclusion must be >= 0");
  const Region& r = strip.region;
  ModulusMinimum m;
  m.min_mod = std::numeric_limits<double>::infinity();
  for (int j = 0; j < r.ny; ++j) {
    for (int i = 0; i < r.nx; ++i) {
      if (!(r.x(i) > x_exclusion)) continue;
      const UVValue& n = strip.at(i, j);
      const double mod = std::hypot(n.u.value, n.v.value);
      ++m.nodes;
      if (mod < m.min_mod) {
        m.min_mod = mod;
        m.x = r.x(i);
        m.y = r.y(j);
        m.bound = n.u.bound + n.v.bound;
      }
    }
  }
  if (m.nodes == 0) throw UsageError("off_line_min_modulus: every column is excluded");
  return m;
}

ModulusMinimum off_line_min_modulus(const Region& region, double x_exclusion, const QuadratureSpec& spec,
                                    int threads) {
  return off_line_min_modulus(evaluate_strip(region, spec, threads), x_exclusion);
}

// ---------------------------------------------------------------------------
// Anomalies

const char* to_string(AnomalyKind kind) noexcept {
  return kind == AnomalyKind::join ? "join" : "bifurcation";
}

std::vector<Anomaly> anomaly_scan(std::span<const Curve> curves, const SignGrid& g) {
  const Region& r = g.region;
  std::vector<Anomaly> out;

  std::vector<bool> saddle(static_cast<std::size_t>(r.nx) * r.ny, false);
  const auto cell_index = [&](int i, int j) { return static_cast<std::size_t>(j) * r.nx + i; };
  for (int j = 0; j + 1 < r.ny; ++j) {
    for (int i = 0; i + 1 < r.nx; ++i) {
      if (!is_saddle(g, i, j)) continue;
      saddle[cell_index(i, j)] = true;
      Anomaly a;
      a.kind = AnomalyKind::bifurcation;
      a.x = 0.5 * (r.x(i) + r.x(i + 1));
      a.y = 0.5 * (r.y(j) + r.y(j + 1));
      a.v_corners = {g.value(i, j), g.value(i + 1, j), g.value(i + 1, j + 1), g.value(i, j + 1)};
      a.u = kNaN;
      const std::array<std::int64_t, 4> cell_edges = {edge_key(r, i, j, false), edge_key(r, i + 1, j, true),
                                                      edge_key(r, i, j + 1, false), edge_key(r, i, j, true)};
      for (std::size_t c = 0; c < curves.size() && std::isnan(a.u); ++c) {
        for (std::size_t k = 0; k < curves[c].edges.size(); ++k) {
          if (std::find(cell_edges.begin(), cell_edges.end(), curves[c].edges[k]) != cell_edges.end()) {
            a.u = curves[c].u_values[k];
            a.curve_a = static_cast<int>(c);
            break;
          }
        }
      }
      out.push_back(a);
    }
  }

  // Bucket points by cell, leaving out points on saddle-cell edges.
  const double dx = r.dx();
  const double dy = r.dy();
  const auto cell_of = [&](const CurvePoint& p) {
    const int i = std::clamp(static_cast<int>(std::floor((p.x - r.x_min) / dx)), 0, r.nx - 2);
    const int j = std::clamp(static_cast<int>(std::floor((p.y - r.y_min) / dy)), 0, r.ny - 2);
    return std::pair{i, j};
  };
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> buckets;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    for (std::size_t k = 0; k < curves[c].points.size(); ++k) {
      bool near_saddle = false;
      if (k < curves[c].edges.size()) {
        for (const auto& [ci, cj] : edge_cells(r, decode(r, curves[c].edges[k]))) {
          near_saddle = near_saddle || saddle[cell_index(ci, cj)];
        }
      }
      if (!near_saddle) buckets[cell_of(curves[c].points[k])].emplace_back(static_cast<int>(c), static_cast<int>(k));
    }
  }
  std::map<std::pair<int, int>, Anomaly> joins;
  const double limit = std::sqrt(2.0);
  for (const auto& [cell, members] : buckets) {
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        const auto it = buckets.find({cell.first + di, cell.second + dj});
        if (it == buckets.end()) continue;
        for (const auto& [ca, ka] : members) {
          for (const auto& [cb, kb] : it->second) {
            if (ca >= cb) continue;
            const CurvePoint& pa = curves[ca].points[ka];
            const CurvePoint& pb = curves[cb].points[kb];
            const double d = std::hypot((pa.x - pb.x) / dx, (pa.y - pb.y) / dy);
            if (d > limit) continue;
            auto found = joins.find({ca, cb});
            if (found == joins.end() || d < found->second.distance_cells) {
              Anomaly a;
              a.kind = AnomalyKind::join;
              a.x = 0.5 * (pa.x + pb.x);
              a.y = 0.5 * (pa.y + pb.y);
              a.curve_a = ca;
              a.curve_b = cb;
              a.distance_cells = d;
              a.u = curves[ca].u_values[ka];
              a.v_corners = {curves[ca].v_values[ka], curves[cb].v_values[kb], kNaN, kNaN};
              joins[{ca, cb}] = a;
            }
          }
        }
      }
    }
  }
  for (auto& [pair, a] : joins) out.push_back(a);
  return out;
}

EpsilonBand epsilon_band(const StripGrid& strip) {
  const Region& r = strip.region;
  int column = -1;
  for (int i = 0; i < r.nx; ++i) {
    if (r.x(i) > 0.0) {
      column = i;
      break;
    }
  }
  if (column < 0) throw UsageError("epsilon_band: no column with x > 0");
  EpsilonBand band;
  band.x = r.x(column);
  band.min_slope = std::numeric_limits<double>::infinity();
  for (int j = 0; j < r.ny; ++j) {
    if (!(r.y(j) > 0.0)) continue;
    const double slope = std::abs(strip.at(column, j).v.value) / band.x;
    if (slope < band.min_slope) {
      band.min_slope = slope;
      band.y_at_min = r.y(j);
    }
  }
  return band;
}

}  // namespace xilab
