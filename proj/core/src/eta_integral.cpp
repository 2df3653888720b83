#include "xilab/eta_integral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "xilab/compensated_sum.hpp"
#include "xilab/errors.hpp"
#include "xilab/parallel.hpp"
#include "xilab/quadrature.hpp"
#include "xilab/theta_series.hpp"

namespace xilab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr long double kEpsExt = std::numeric_limits<long double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();
// Rounding allowance per unit of sum |w_i f(t_i)|: a few ulps for the kernel
// value, the weight function, the product and the compensated sum.
constexpr double kRoundoffUlps = 8.0;
// Absolute accuracy requested from the kernel series at each node.
constexpr double kSeriesTol = 1e-22;
constexpr double kGridStep = 0.01;
constexpr int kMaxPower = 2;

struct KernelEnvelope {
  double slope_offset;  // |K(t)| <= C exp(offset * t - pi e^{4t}) for t >= 0
  double log_constant;
};

KernelEnvelope envelope(Kernel kernel) {
  if (kernel == Kernel::G) {
    return {9.0, std::log(16.0 * kPi * kPi / (1.0 - kRatioBound))};
  }
  return {1.0, -std::log1p(-std::exp(-3.0 * kPi))};
}

long double kernel_value(Kernel kernel, long double t) {
  return series_extended(kernel == Kernel::G ? SeriesKind::G : SeriesKind::F, t, kSeriesTol);
}

double derived_cutoff(Kernel kernel, double x_abs, double tol) {
  const double log_target = std::log(tol / 2.0);
  for (int k = 1; k <= 500; ++k) {
    const double T = kGridStep * k;
    bool ok = true;
    for (int p = 0; p <= kMaxPower && ok; ++p) ok = log_tail_bound(kernel, T, x_abs, p) < log_target;
    if (ok) return T;
  }
  throw ConvergenceError("cutoff search exceeded T = 5", kInf, kInf);
}

}  // namespace

const char* to_string(Route route) noexcept {
  switch (route) {
    case Route::via_G: return "via_G";
    case Route::via_F: return "via_F";
    case Route::oracle_xi: return "oracle_xi";
  }
  return "unknown";
}

void QuadratureSpec::validate() const {
  if (!(tol > 0.0)) throw UsageError("quadrature tol must be positive");
  if (cutoff_T < 0.0 || !std::isfinite(cutoff_T)) throw UsageError("cutoff_T must be >= 0 (0 = derived)");
  if (max_panels < 2) throw UsageError("max_panels must be at least 2");
  if (!(max_panel_width > 0.0)) throw UsageError("max_panel_width must be positive");
}

Complex transform(Complex point, Direction direction) noexcept {
  return direction == Direction::s_to_z ? 2.0 * point - 1.0 : (point + 1.0) / 2.0;
}

double integrand_bound(double t, double x_abs) {
  return std::exp((x_abs + 9.0) * t - kPi * std::exp(4.0 * t)) * 16.0 * kPi * kPi / (1.0 - kRatioBound);
}

double log_tail_bound(Kernel kernel, double T, double x_abs, int power) {
  if (!(T > 0.0)) return kInf;
  const KernelEnvelope env = envelope(kernel);
  // phi(t) = log C + (offset + x) t - pi e^{4t} + p log t is concave, so the
  // tail integral is at most exp(phi(T)) / |phi'(T)| once phi'(T) < 0.
  const double e4 = std::exp(4.0 * T);
  const double slope = env.slope_offset + x_abs;
  const double dphi = slope - 4.0 * kPi * e4 + power / T;
  if (!(dphi < 0.0)) return kInf;
  const double phi = env.log_constant + slope * T - kPi * e4 + power * std::log(T);
  return phi - std::log(-dphi);
}

double cutoff_T(double x_abs, double tol) {
  if (!(tol > 0.0)) throw UsageError("cutoff_T: tol must be positive");
  const double log_target = std::log(tol / 2.0);
  for (int k = 1; k <= 500; ++k) {
    const double T = kGridStep * k;
    if (log_tail_bound(Kernel::G, T, x_abs, 0) < log_target) return T;
  }
  throw ConvergenceError("cutoff_T: no cutoff below T = 5", kInf, kInf);
}

// ---------------------------------------------------------------------------
// KernelQuadrature

KernelQuadrature::KernelQuadrature(Kernel kernel, double x_abs_max, double y_abs_max,
                                   const QuadratureSpec& spec)
    : kernel_(kernel), spec_(spec), x_abs_max_(std::abs(x_abs_max)), y_abs_max_(std::abs(y_abs_max)) {
  spec_.validate();
  if (!std::isfinite(x_abs_max_) || !std::isfinite(y_abs_max_)) throw DomainError("non-finite evaluation box");
  cutoff_ = spec_.cutoff_T > 0.0 ? spec_.cutoff_T
                                 : derived_cutoff(kernel_, x_abs_max_, std::min(spec_.tol, kTailTarget));
  const double oscillation_width = (2.0 * kPi / std::max(y_abs_max_, 1.0)) / 4.0;
  const double width = std::min(spec_.max_panel_width, oscillation_width);
  panels_ = static_cast<int>(std::ceil(cutoff_ / width));
  if (2 * panels_ > spec_.max_panels) {
    budget_exceeded_ = true;
    panels_ = std::max(1, spec_.max_panels / 2);
  }
  const auto fill = [&](int panels) {
    PanelNodes pn = composite_nodes(0.0, cutoff_, panels);
    Nodes nodes;
    nodes.t = std::move(pn.t);
    nodes.c.resize(nodes.t.size());
    for (std::size_t k = 0; k < nodes.t.size(); ++k) nodes.c[k] = pn.w[k] * kernel_value(kernel_, nodes.t[k]);
    return nodes;
  };
  coarse_ = fill(panels_);
  fine_ = fill(2 * panels_);
}

void KernelQuadrature::check_box(double x, double y) const {
  if (!std::isfinite(x) || !std::isfinite(y)) throw DomainError("non-finite evaluation point");
  // A small slack keeps grid endpoints computed as x_min + i * dx inside.
  const double slack = 1e-12 * (1.0 + std::max(x_abs_max_, y_abs_max_));
  if (std::abs(x) > x_abs_max_ + slack || std::abs(y) > y_abs_max_ + slack) {
    throw UsageError("point outside the box this quadrature was sized for");
  }
}

double KernelQuadrature::error_floor(double x, int power, long double abs_sum) const {
  const double tail = std::exp(log_tail_bound(kernel_, cutoff_, std::abs(x), power));
  const double series = kSeriesTol * cutoff_ * std::pow(cutoff_, power) * std::exp(std::abs(x) * cutoff_);
  return static_cast<double>(kRoundoffUlps * kEpsExt * abs_sum) + tail + series;
}

namespace {

// Rounds an extended-precision integral to double, charging the rounding.
BoundedReal round_to_double(long double fine, long double coarse, double floor) {
  const auto value = static_cast<double>(fine);
  return {value, static_cast<double>(std::abs(fine - coarse)) + floor + kEps * std::abs(value)};
}

}  // namespace

BoundedReal KernelQuadrature::integrate(Weight weight, double x, double y, int power) const {
  check_box(x, y);
  if (power < 0 || power > kMaxPower) throw UsageError("moment power must be 0, 1 or 2");
  long double abs_sum = 0;
  const long double xl = x;
  const long double yl = y;
  const auto run = [&](const Nodes& nodes, bool track_abs) {
    CompensatedSum<long double> sum;
    for (std::size_t k = 0; k < nodes.t.size(); ++k) {
      const long double t = nodes.t[k];
      long double ct = nodes.c[k];
      for (int p = 0; p < power; ++p) ct *= t;
      const long double h = weight == Weight::sinh_sin ? std::sinh(xl * t) : std::cosh(xl * t);
      const long double g = weight == Weight::cosh_cos ? std::cos(yl * t) : std::sin(yl * t);
      sum.add(ct * h * g);
      if (track_abs) abs_sum += std::abs(ct) * std::abs(h);
    }
    return sum.value();
  };
  const long double fine = run(fine_, true);
  const long double coarse = run(coarse_, false);
  const BoundedReal out = round_to_double(fine, coarse, error_floor(x, power, abs_sum));
  if (budget_exceeded_) throw ConvergenceError("panel budget exhausted", out.value, out.bound);
  return out;
}

BoundedReal KernelQuadrature::cosh_cos(double x, double y, int power) const {
  return integrate(Weight::cosh_cos, x, y, power);
}

BoundedReal KernelQuadrature::sinh_sin(double x, double y, int power) const {
  return integrate(Weight::sinh_sin, x, y, power);
}

BoundedReal KernelQuadrature::cosh_sin(double x, double y, int power) const {
  return integrate(Weight::cosh_sin, x, y, power);
}

UVValue KernelQuadrature::uv(double x, double y) const {
  const std::array<double, 1> xs{x};
  const std::array<double, 1> ys{y};
  return uv_grid(xs, ys, 1).front();
}

std::vector<UVValue> KernelQuadrature::uv_grid(std::span<const double> xs, std::span<const double> ys,
                                               int threads) const {
  for (double x : xs) check_box(x, 0.0);
  for (double y : ys) check_box(0.0, y);
  const std::size_t nx = xs.size();
  const std::size_t nf = fine_.t.size();
  const std::size_t nc = coarse_.t.size();

  // Per column: c_k cosh(x t_k) and c_k sinh(x t_k) for both node sets.
  struct Column {
    std::vector<long double> fc, fs, cc, cs;
    long double abs_u = 0;
    long double abs_v = 0;
    double floor_u = 0.0;
    double floor_v = 0.0;
  };
  std::vector<Column> columns(nx);
  parallel_for(nx, threads, [&](std::size_t i) {
    const long double x = xs[i];
    Column& col = columns[i];
    col.fc.resize(nf);
    col.fs.resize(nf);
    col.cc.resize(nc);
    col.cs.resize(nc);
    for (std::size_t k = 0; k < nf; ++k) {
      const long double h = std::cosh(x * fine_.t[k]);
      const long double s = std::sinh(x * fine_.t[k]);
      col.fc[k] = fine_.c[k] * h;
      col.fs[k] = fine_.c[k] * s;
      col.abs_u += std::abs(fine_.c[k]) * std::abs(h);
      col.abs_v += std::abs(fine_.c[k]) * std::abs(s);
    }
    for (std::size_t k = 0; k < nc; ++k) {
      col.cc[k] = coarse_.c[k] * std::cosh(x * coarse_.t[k]);
      col.cs[k] = coarse_.c[k] * std::sinh(x * coarse_.t[k]);
    }
    col.floor_u = error_floor(xs[i], 0, col.abs_u);
    col.floor_v = error_floor(xs[i], 0, col.abs_v);
  });

  std::vector<UVValue> out(nx * ys.size());
  parallel_for(ys.size(), threads, [&](std::size_t j) {
    const long double y = ys[j];
    std::vector<long double> fcos(nf), fsin(nf), ccos(nc), csin(nc);
    for (std::size_t k = 0; k < nf; ++k) {
      fcos[k] = std::cos(y * fine_.t[k]);
      fsin[k] = std::sin(y * fine_.t[k]);
    }
    for (std::size_t k = 0; k < nc; ++k) {
      ccos[k] = std::cos(y * coarse_.t[k]);
      csin[k] = std::sin(y * coarse_.t[k]);
    }
    for (std::size_t i = 0; i < nx; ++i) {
      const Column& col = columns[i];
      CompensatedSum<long double> uf, uc, vf, vc;
      for (std::size_t k = 0; k < nf; ++k) {
        uf.add(col.fc[k] * fcos[k]);
        vf.add(col.fs[k] * fsin[k]);
      }
      for (std::size_t k = 0; k < nc; ++k) {
        uc.add(col.cc[k] * ccos[k]);
        vc.add(col.cs[k] * csin[k]);
      }
      UVValue& node = out[j * nx + i];
      node.u = round_to_double(uf.value(), uc.value(), col.floor_u);
      if (xs[i] == 0.0 || ys[j] == 0.0) {
        node.v = {0.0, 0.0};
      } else {
        node.v = round_to_double(vf.value(), vc.value(), col.floor_v);
      }
    }
  });
  if (budget_exceeded_ && !out.empty()) {
    throw ConvergenceError("panel budget exhausted", out.front().u.value, out.front().u.bound);
  }
  return out;
}

std::function<double(double)> KernelQuadrature::v_line_sampler(bool vertical, double fixed) const {
  if (vertical) {
    check_box(fixed, 0.0);
  } else {
    check_box(0.0, fixed);
  }
  const long double a = fixed;
  std::vector<long double> weights(fine_.t.size());
  for (std::size_t k = 0; k < weights.size(); ++k) {
    // Same association as uv_grid: (c sinh(x t)) sin(y t).
    weights[k] = vertical ? fine_.c[k] * std::sinh(a * fine_.t[k]) : std::sin(a * fine_.t[k]);
  }
  return [this, vertical, fixed, weights = std::move(weights)](double free) {
    if (fixed == 0.0 || free == 0.0) return 0.0;
    if (vertical) {
      check_box(fixed, free);
    } else {
      check_box(free, fixed);
    }
    const long double b = free;
    CompensatedSum<long double> sum;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (vertical) {
        sum.add(weights[k] * std::sin(b * fine_.t[k]));
      } else {
        sum.add(fine_.c[k] * std::sinh(b * fine_.t[k]) * weights[k]);
      }
    }
    return static_cast<double>(sum.value());
  };
}

// ---------------------------------------------------------------------------
// Point evaluators

namespace {

EvalResult eta_adaptive(Complex z, const QuadratureSpec& spec) {
  const double x = z.real();
  const double y = z.imag();
  const double T = spec.cutoff_T > 0.0 ? spec.cutoff_T
                                       : derived_cutoff(Kernel::G, std::abs(x), std::min(spec.tol, kTailTarget));
  const int initial = static_cast<int>(std::ceil(T / spec.max_panel_width));
  TruncationPolicy policy;
  policy.tol = kSeriesTol;
  const auto u_integrand = [&](double t) { return g_kernel(t, policy).value * std::cosh(x * t) * std::cos(y * t); };
  const auto v_integrand = [&](double t) { return g_kernel(t, policy).value * std::sinh(x * t) * std::sin(y * t); };
  const AdaptiveResult u = adaptive_gauss(u_integrand, 0.0, T, spec.tol / 4.0, initial, spec.max_panels);
  AdaptiveResult v;
  v.converged = true;
  if (x != 0.0 && y != 0.0) v = adaptive_gauss(v_integrand, 0.0, T, spec.tol / 4.0, initial, spec.max_panels);
  const double tail = std::exp(log_tail_bound(Kernel::G, T, std::abs(x), 0));
  const double series = kSeriesTol * T * std::exp(std::abs(x) * T);
  const double bound = u.error_estimate + v.error_estimate +
                       kRoundoffUlps * kEps * (u.abs_integral + v.abs_integral) + 2.0 * (tail + series);
  const EvalResult result{{u.value, v.value}, bound, Route::via_G};
  if (!u.converged || !v.converged) {
    throw ConvergenceError("adaptive panel budget exhausted", std::abs(result.value), bound);
  }
  return result;
}

void check_bound(const EvalResult& r, double tol) {
  if (!(r.abs_error_bound <= tol)) {
    throw ConvergenceError(std::string("error bound above tol on route ") + to_string(r.route),
                           std::abs(r.value), r.abs_error_bound);
  }
}

}  // namespace

EvalResult eta(Complex z, const QuadratureSpec& spec, Route route) {
  spec.validate();
  if (route == Route::oracle_xi) throw UsageError("eta: use xi_oracle for the oracle route");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("eta: non-finite z");
  EvalResult result;
  if (route == Route::via_G && spec.panel_rule == PanelRule::adaptive_bisection) {
    result = eta_adaptive(z, spec);
  } else {
    const Kernel kernel = route == Route::via_G ? Kernel::G : Kernel::F;
    const KernelQuadrature quad(kernel, z.real(), z.imag(), spec);
    const UVValue uv = quad.uv(z.real(), z.imag());
    const Complex integral{uv.u.value, uv.v.value};
    const double bound = uv.u.bound + uv.v.bound;
    if (route == Route::via_G) {
      result = {integral, bound, route};
    } else {
      const Complex factor = z * z - 1.0;
      const Complex value = 0.5 + factor * integral;
      result = {value, std::abs(factor) * bound + 4.0 * kEps * std::abs(value), route};
    }
  }
  check_bound(result, spec.tol);
  return result;
}

UVValue uv(double x, double y, const QuadratureSpec& spec) {
  const KernelQuadrature quad(Kernel::G, x, y, spec);
  return quad.uv(x, y);
}

EvalResult xi_oracle(Complex s, const QuadratureSpec& spec) {
  spec.validate();
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw DomainError("xi_oracle: non-finite s");
  const double sigma = s.real();
  const double height = std::abs(s.imag());
  const Complex factor = s * (s - 1.0) / 2.0;
  const double factor_abs = std::max(std::abs(factor), 1e-300);

  // |Psi(tau)| <= e^{-pi tau} / (1 - e^{-3 pi}) and |tau^a1 + tau^a2| <= 2 tau^a.
  const double a = std::max(sigma / 2.0 - 1.0, -(1.0 + sigma) / 2.0);
  const double psi_scale = 2.0 / (1.0 - std::exp(-3.0 * kPi));
  const auto log_tail = [&](double T) {
    if (a <= 0.0) return std::log(psi_scale) + a * std::log(T) - kPi * T - std::log(kPi);
    const double d = kPi - a / T;
    if (!(d > 0.0)) return kInf;
    return std::log(psi_scale) + a * std::log(T) - kPi * T - std::log(d);
  };
  const double log_target = std::log(std::min(spec.tol, kTailTarget) / 2.0 / factor_abs);
  double tau_max = 1.5;
  while (log_tail(tau_max) >= log_target) {
    tau_max += 0.5;
    if (tau_max > 200.0) throw ConvergenceError("xi_oracle: no cutoff found", kInf, kInf);
  }
  const double width = std::min(0.25, kPi / std::max(height, 1.0));
  int panels = static_cast<int>(std::ceil((tau_max - 1.0) / width));
  const bool budget_exceeded = 2 * panels > spec.max_panels;
  if (budget_exceeded) panels = std::max(1, spec.max_panels / 2);

  using ComplexExt = std::complex<long double>;
  const ComplexExt sl{s.real(), s.imag()};
  const ComplexExt e1 = sl / 2.0L - 1.0L;
  const ComplexExt e2 = -(1.0L + sl) / 2.0L;
  long double abs_sum = 0;
  const auto run = [&](int count, bool track_abs) {
    const PanelNodes nodes = composite_nodes(1.0L, tau_max, count);
    CompensatedSum<long double> re, im;
    for (std::size_t k = 0; k < nodes.t.size(); ++k) {
      const long double tau = nodes.t[k];
      const long double lt = std::log(tau);
      const ComplexExt term = nodes.w[k] * psi_extended(tau, kSeriesTol) * (std::exp(e1 * lt) + std::exp(e2 * lt));
      re.add(term.real());
      im.add(term.imag());
      if (track_abs) abs_sum += std::abs(term);
    }
    return ComplexExt{re.value(), im.value()};
  };
  const ComplexExt fine = run(2 * panels, true);
  const ComplexExt coarse = run(panels, false);
  const ComplexExt value_ext = 0.5L + ComplexExt{factor.real(), factor.imag()} * fine;
  const Complex value{static_cast<double>(value_ext.real()), static_cast<double>(value_ext.imag())};
  const double integral_error = static_cast<double>(std::abs(fine - coarse) + kRoundoffUlps * kEpsExt * abs_sum) +
                                std::exp(log_tail(tau_max)) + kSeriesTol * 2.0 * (tau_max - 1.0);
  const EvalResult result{value, factor_abs * integral_error + 4.0 * kEps * std::abs(value), Route::oracle_xi};
  if (budget_exceeded) throw ConvergenceError("xi_oracle: panel budget exhausted", std::abs(value), result.abs_error_bound);
  check_bound(result, spec.tol);
  return result;
}

double integration_by_parts_residual(Complex z, const QuadratureSpec& spec) {
  const KernelQuadrature fq(Kernel::F, z.real(), z.imag(), spec);
  const KernelQuadrature gq(Kernel::G, z.real(), z.imag(), spec);
  const UVValue f = fq.uv(z.real(), z.imag());
  const UVValue g = gq.uv(z.real(), z.imag());
  TruncationPolicy policy;
  policy.tol = kSeriesTol;
  const double f_prime_zero = f_kernel(0.0, 1, policy).value;
  const Complex lhs = (z * z - 1.0) * Complex{f.u.value, f.v.value};
  const Complex rhs = f_prime_zero + Complex{g.u.value, g.v.value};
  return std::abs(lhs - rhs);
}

CauchyRiemannResidual cauchy_riemann_residual(Complex z, double h, const QuadratureSpec& spec) {
  if (!(h > 0.0)) throw UsageError("cauchy_riemann_residual: h must be positive");
  const double x = z.real();
  const double y = z.imag();
  const KernelQuadrature quad(Kernel::G, std::abs(x) + h, std::abs(y) + h, spec);
  const UVValue xp = quad.uv(x + h, y);
  const UVValue xm = quad.uv(x - h, y);
  const UVValue yp = quad.uv(x, y + h);
  const UVValue ym = quad.uv(x, y - h);
  const double ux = (xp.u.value - xm.u.value) / (2.0 * h);
  const double vx = (xp.v.value - xm.v.value) / (2.0 * h);
  const double uy = (yp.u.value - ym.u.value) / (2.0 * h);
  const double vy = (yp.v.value - ym.v.value) / (2.0 * h);
  return {std::abs(ux - vy), std::abs(uy + vx)};
}

std::vector<PointRow> uv_batch(std::span<const Complex> points, const QuadratureSpec& spec, int threads) {
  double x_max = 0.0;
  double y_max = 0.0;
  for (const Complex& p : points) {
    x_max = std::max(x_max, std::abs(p.real()));
    y_max = std::max(y_max, std::abs(p.imag()));
  }
  const KernelQuadrature quad(Kernel::G, x_max, y_max, spec);
  std::vector<PointRow> rows(points.size());
  parallel_for(points.size(), threads, [&](std::size_t i) {
    const UVValue value = quad.uv(points[i].real(), points[i].imag());
    rows[i] = {points[i].real(), points[i].imag(), value.u.value, value.v.value, value.u.bound + value.v.bound};
  });
  return rows;
}

}  // namespace xilab
