#include "xilab/critical_line.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "xilab/compensated_sum.hpp"
#include "xilab/errors.hpp"
#include "xilab/parallel.hpp"
#include "xilab/quadrature.hpp"
#include "xilab/theta_series.hpp"

namespace xilab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr long double kPiExt = std::numbers::pi_v<long double>;
constexpr long double kEpsExt = std::numeric_limits<long double>::epsilon();
constexpr int kEnvelopeSamples = 81;
// Residual accepted at a refined zero, relative to the local envelope.
constexpr double kResidualRelative = 1e-6;
constexpr long double kSeriesTolExt = 1e-24L;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

std::vector<double> sample_grid(double y_min, double y_max, double step) {
  std::vector<double> ys;
  const auto n = static_cast<std::size_t>(std::floor((y_max - y_min) / step + 1e-9));
  ys.reserve(n + 2);
  for (std::size_t k = 0; k <= n; ++k) ys.push_back(y_min + static_cast<double>(k) * step);
  if (ys.back() < y_max) ys.push_back(y_max);
  return ys;
}

void check_scan_args(double y_min, double y_max, double step, double tol, const char* name) {
  const std::string who(name);
  if (!(step > 0.0) || !std::isfinite(step)) throw UsageError(who + ": step must be positive");
  if (!(tol > 0.0)) throw UsageError(who + ": tol must be positive");
  if (!(y_min >= 0.0) || !std::isfinite(y_max) || y_max < y_min) {
    throw UsageError(who + ": need 0 <= y_min <= y_max");
  }
}

double envelope_of(const CriticalLine& line, double y0, double halfwidth) {
  double env = 0.0;
  for (int k = 0; k < kEnvelopeSamples; ++k) {
    const double y = y0 - halfwidth + 2.0 * halfwidth * k / (kEnvelopeSamples - 1);
    env = std::max(env, std::abs(line.u(y).value));
  }
  return env;
}

// Brackets [y_k, y_k+1] where the sampled values change sign; exact zeros at a
// sample become degenerate brackets.
std::vector<std::pair<double, double>> sign_changes(const std::vector<double>& ys, const std::vector<double>& f) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k < ys.size(); ++k) {
    if (f[k] == 0.0) {
      out.emplace_back(ys[k], ys[k]);
    } else if (k + 1 < ys.size() && sign_of(f[k]) * sign_of(f[k + 1]) < 0) {
      out.emplace_back(ys[k], ys[k + 1]);
    }
  }
  return out;
}

BracketedRoot refine(const CriticalLine& line, int order, double lo, double hi, double tol) {
  if (lo == hi) return {lo, lo, lo, line.u(lo, order).value, 0};
  const auto f = [&](double y) { return line.u(y, order).value; };
  const double flo = f(lo);
  const double fhi = f(hi);
  if (sign_of(flo) * sign_of(fhi) > 0) throw UsageError("refine_zero: bracket has no sign change");
  return brent_root(f, lo, hi, flo, fhi, 0.5 * tol);
}

}  // namespace

const char* to_string(StationaryKind kind) noexcept {
  switch (kind) {
    case StationaryKind::positive_max: return "positive_max";
    case StationaryKind::negative_min: return "negative_min";
    case StationaryKind::anomalous: return "anomalous";
  }
  return "anomalous";
}

CriticalLine::CriticalLine(double y_max, const QuadratureSpec& spec)
    : y_max_(std::abs(y_max)), quad_(Kernel::G, 0.0, std::abs(y_max), spec) {}

BoundedReal CriticalLine::u(double y, int order) const {
  switch (order) {
    case 0: return quad_.cosh_cos(0.0, y, 0);
    case 1: {
      if (y == 0.0) return {0.0, 0.0};
      const BoundedReal r = quad_.cosh_sin(0.0, y, 1);
      return {-r.value, r.bound};
    }
    case 2: {
      const BoundedReal r = quad_.cosh_cos(0.0, y, 2);
      return {-r.value, r.bound};
    }
    default: throw UsageError("u_line: order must be 0, 1 or 2");
  }
}

BoundedReal u_line(double y, int order, const QuadratureSpec& spec) {
  if (!std::isfinite(y)) throw DomainError("u_line: y must be finite");
  return CriticalLine(y, spec).u(y, order);
}

BracketedRoot refine_zero(const CriticalLine& line, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw UsageError("refine_zero: tol must be positive");
  if (!(lo <= hi)) std::swap(lo, hi);
  return refine(line, 0, lo, hi, tol);
}

double refine_zero(double lo, double hi, double tol, const LineOptions& options) {
  const CriticalLine line(std::max(std::abs(lo), std::abs(hi)), options.spec);
  return refine_zero(line, lo, hi, tol).root;
}

SimplicityReport classify_zero(const CriticalLine& line, double y0, double h, double margin,
                               double envelope_halfwidth) {
  if (!(h > 0.0)) throw UsageError("classify_zero: h must be positive");
  SimplicityReport r;
  r.y0 = y0;
  const BoundedReal at = line.u(y0);
  r.residual = std::abs(at.value);
  r.u_deriv = std::abs(line.u(y0, 1).value);
  r.envelope = envelope_of(line, y0, envelope_halfwidth);
  r.sign_below = sign_of(line.u(y0 - h).value);
  r.sign_above = sign_of(line.u(y0 + h).value);
  r.residual_ok = r.residual <= std::max(kResidualRelative * r.envelope, 2.0 * at.bound);
  r.simple = r.residual_ok && r.u_deriv > margin * r.envelope && r.sign_below * r.sign_above < 0;
  return r;
}

SimplicityReport classify_zero(double y0, double h, double margin, const LineOptions& options) {
  const CriticalLine line(std::abs(y0) + options.envelope_halfwidth + std::abs(h), options.spec);
  return classify_zero(line, y0, h, margin, options.envelope_halfwidth);
}

std::vector<ZeroRecord> scan_zeros(double y_min, double y_max, double step, double tol,
                                   const LineOptions& options) {
  check_scan_args(y_min, y_max, step, tol, "scan_zeros");
  const CriticalLine line(y_max + step + options.envelope_halfwidth + options.neighbour_h, options.spec);
  const std::vector<double> ys = sample_grid(y_min, y_max, step);
  std::vector<double> f(ys.size());
  parallel_for(ys.size(), options.threads, [&](std::size_t k) { f[k] = line.u(ys[k]).value; });

  const auto brackets = sign_changes(ys, f);
  std::vector<ZeroRecord> out(brackets.size());
  parallel_for(brackets.size(), options.threads, [&](std::size_t k) {
    const BracketedRoot root = refine(line, 0, brackets[k].first, brackets[k].second, tol);
    const SimplicityReport report =
        classify_zero(line, root.root, options.neighbour_h, options.simplicity_margin, options.envelope_halfwidth);
    ZeroRecord& z = out[k];
    z.y = root.root;
    z.t_zeta = root.root / 2.0;
    z.y_lo = root.lo;
    z.y_hi = root.hi;
    z.residual = report.residual;
    z.u_deriv = report.u_deriv;
    z.simple = report.simple;
  });
  std::sort(out.begin(), out.end(), [](const ZeroRecord& a, const ZeroRecord& b) { return a.y < b.y; });
  return out;
}

std::vector<StationaryPoint> stationary_points(double y_min, double y_max, double step, double tol,
                                               const LineOptions& options) {
  check_scan_args(y_min, y_max, step, tol, "stationary_points");
  const CriticalLine line(y_max + step, options.spec);
  const std::vector<double> ys = sample_grid(y_min, y_max, step);
  std::vector<double> f(ys.size());
  parallel_for(ys.size(), options.threads, [&](std::size_t k) { f[k] = line.u(ys[k], 1).value; });

  const auto brackets = sign_changes(ys, f);
  std::vector<StationaryPoint> out(brackets.size());
  parallel_for(brackets.size(), options.threads, [&](std::size_t k) {
    const BracketedRoot root = refine(line, 1, brackets[k].first, brackets[k].second, tol);
    StationaryPoint& s = out[k];
    s.y_m = root.root;
    s.u_value = line.u(root.root).value;
    s.u_deriv = root.f_root;
    s.curvature = line.u(root.root, 2).value;
    if (s.u_value > 0.0 && s.curvature < 0.0) {
      s.kind = StationaryKind::positive_max;
    } else if (s.u_value < 0.0 && s.curvature > 0.0) {
      s.kind = StationaryKind::negative_min;
    } else {
      s.kind = StationaryKind::anomalous;
    }
  });
  std::sort(out.begin(), out.end(), [](const StationaryPoint& a, const StationaryPoint& b) { return a.y_m < b.y_m; });
  return out;
}

// ---------------------------------------------------------------------------
// p(y), q(y)

namespace {

// log of an upper bound on G(s) for s >= 0: every term is positive and
// consecutive terms shrink by at least the ratio bound.
double log_g_upper(double s) { return g_term_log_magnitude(s, 1) - std::log1p(-kRatioBound); }

// Smallest s on a 0.01 grid with G(s) / y <= tail_tol.
double support_end(double y, double tail_tol) {
  const double target = std::log(tail_tol * y);
  for (int k = 1; k <= 500; ++k) {
    const double s = 0.01 * k;
    if (log_g_upper(s) <= target) return s;
  }
  throw ConvergenceError("pq: no support cutoff below t = 5", 0.0, std::numeric_limits<double>::infinity());
}

struct IntervalIntegral {
  long double value;
  long double error;
};

// int_{k pi}^{(k+1) pi} G'(t / y) sin t dt, written as
// (-1)^k int_0^pi G'((k pi + tau) / y) sin tau dtau to keep the phase exact.
IntervalIntegral interval_integral(long double y, int k, int subpanels) {
  const auto run = [&](int panels, long double& abs_sum) {
    const PanelNodes nodes = composite_nodes(0.0L, kPiExt, panels);
    CompensatedSum<long double> sum;
    for (std::size_t i = 0; i < nodes.t.size(); ++i) {
      const long double s = (kPiExt * k + nodes.t[i]) / y;
      const long double term = nodes.w[i] * series_extended(SeriesKind::G1, s, kSeriesTolExt) * std::sin(nodes.t[i]);
      sum.add(term);
      abs_sum += std::abs(term);
    }
    return sum.value();
  };
  long double abs_fine = 0;
  long double abs_coarse = 0;
  const long double fine = run(2 * subpanels, abs_fine);
  const long double coarse = run(subpanels, abs_coarse);
  const long double series = kSeriesTolExt * kPiExt;
  const long double sign = (k % 2 == 0) ? 1 : -1;
  return {sign * fine, std::abs(fine - coarse) + 8 * kEpsExt * abs_fine + series};
}

}  // namespace

PQValue pq(double y, int K, const PQPolicy& policy) {
  if (!std::isfinite(y)) throw DomainError("pq: y must be finite");
  if (y < policy.y_floor) throw UsageError("pq: y is below y_floor");
  if (!(policy.panel_width > 0.0) || !(policy.tail_tol > 0.0)) throw UsageError("pq: invalid policy");
  if (K <= 0) K = static_cast<int>(std::ceil(y * support_end(y, policy.tail_tol) / kPi));
  // G decreases on (0, inf), so int_{K pi}^inf |G'(t/y)| dt / y^2 = G(K pi / y) / y.
  const double tail = std::exp(log_g_upper(K * kPi / y)) / y;
  if (!(tail <= policy.tail_tol)) throw CoverageError("pq: K intervals do not cover the support", tail);

  const int subpanels = std::max(1, static_cast<int>(std::ceil(kPi / (y * policy.panel_width))));
  CompensatedSum<long double> even_sum, odd_sum;
  long double even_err = 0;
  long double odd_err = 0;
  for (int k = 0; k < K; ++k) {
    const IntervalIntegral I = interval_integral(y, k, subpanels);
    if (k % 2 == 0) {
      even_sum.add(I.value);
      even_err += I.error;
    } else {
      odd_sum.add(I.value);
      odd_err += I.error;
    }
  }
  const long double y2 = static_cast<long double>(y) * y;
  const long double p = -even_sum.value() / y2;
  const long double q = odd_sum.value() / y2;
  PQValue out;
  out.y = y;
  out.p = static_cast<double>(p);
  out.q = static_cast<double>(q);
  out.diff = out.p - out.q;
  out.intervals_used = K;
  out.tail_bound = tail;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  out.p_bound = static_cast<double>(even_err / y2) + eps * std::abs(out.p);
  out.q_bound = static_cast<double>(odd_err / y2) + eps * std::abs(out.q);
  return out;
}

std::vector<PQRow> pq_table(std::span<const double> ys, int K, const PQPolicy& policy, int threads) {
  const double g0 = g_kernel(0.0).value;
  std::vector<PQRow> rows(ys.size());
  parallel_for(ys.size(), threads, [&](std::size_t i) {
    rows[i].value = pq(ys[i], K, policy);
    rows[i].scaled_p = kPi * ys[i] * rows[i].value.p / g0;
  });
  return rows;
}

OdeResidual ode_residual(double y, double h, const QuadratureSpec& spec) {
  if (!(y >= 10.0) || !std::isfinite(y)) throw UsageError("ode_residual: y must be >= 10");
  if (!(h > 0.0)) throw UsageError("ode_residual: h must be positive");
  constexpr double halfwidth = 2.0;
  const CriticalLine line(y + halfwidth + h, spec);
  OdeResidual r;
  r.y = y;
  r.f = line.u(y).value;
  r.f1 = line.u(y, 1).value;
  r.f2 = line.u(y, 2).value;
  r.f1_central = (line.u(y + h).value - line.u(y - h).value) / (2.0 * h);
  r.R = r.f2 + 6.0 * r.f1 / y + 4.0 * r.f / (y * y);
  r.envelope = envelope_of(line, y, halfwidth);
  r.ratio = r.envelope > 0.0 ? std::abs(r.R) * y * y * y / r.envelope : std::numeric_limits<double>::infinity();
  return r;
}

}  // namespace xilab
