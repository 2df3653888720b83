#pragma once

// eta(z) = xi((z + 1) / 2) evaluated by quadrature:
//
//   via_G      eta(z) = int_0^inf G(t) cosh(z t) dt
//   via_F      eta(z) = 1/2 + (z^2 - 1) int_0^inf F(t) cosh(z t) dt
//   oracle_xi  xi(s)  = 1/2 + s(s - 1)/2 int_1^inf Psi(tau) (tau^{s/2-1} + tau^{-(1+s)/2}) dtau
//
// Reported error bounds are the sum of a certified tail bound past the
// cutoff, a one-refinement quadrature estimate (n vs 2n panels) and a
// floating-point rounding allowance.

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace xilab {

using Complex = std::complex<double>;

enum class PanelRule { fixed_order_panels, adaptive_bisection };
enum class Route { via_G, via_F, oracle_xi };
enum class Kernel { G, F };
enum class Direction { s_to_z, z_to_s };

const char* to_string(Route route) noexcept;

struct QuadratureSpec {
  double tol = 1e-10;
  /// Integration cutoff; 0 derives it from the certified tail bound.
  double cutoff_T = 0.0;
  int max_panels = 4096;
  PanelRule panel_rule = PanelRule::fixed_order_panels;
  double max_panel_width = 0.05;

  /// Throws UsageError on a non-positive tol/cutoff/panel budget.
  void validate() const;
};

/// Tail target used when cutoff_T is derived: far below anything binary64
/// can resolve, so the cutoff never contributes a visible error.
inline constexpr double kTailTarget = 1e-40;

struct BoundedReal {
  double value = 0.0;
  double bound = 0.0;
};

struct EvalResult {
  Complex value;
  double abs_error_bound = 0.0;
  Route route = Route::via_G;
};

struct UVValue {
  BoundedReal u;
  BoundedReal v;
};

/// z = 2s - 1 or s = (z + 1) / 2.
Complex transform(Complex point, Direction direction) noexcept;

/// exp[(x_abs + 9) t - pi e^{4t}] 16 pi^2 / (1 - r): bounds |G(t) cosh(z t)|
/// for t >= 0 and |Re z| <= x_abs.
double integrand_bound(double t, double x_abs);

/// log of an upper bound on int_T^inf t^power |K(t) cosh(z t)| dt over
/// |Re z| <= x_abs; +inf when the bound is not yet certified at T.
double log_tail_bound(Kernel kernel, double T, double x_abs, int power = 0);

/// Smallest T on the 0.01 grid with int_T^inf integrand_bound < tol / 2.
double cutoff_T(double x_abs, double tol);

/// Composite Gauss-Legendre quadrature of K(t) against hyperbolic/trig
/// weights, with K sampled once at construction. Sized for |x| <= x_abs_max
/// and |y| <= y_abs_max; evaluation outside that box throws UsageError.
/// Immutable after construction, so concurrent evaluation is safe.
class KernelQuadrature {
 public:
  KernelQuadrature(Kernel kernel, double x_abs_max, double y_abs_max, const QuadratureSpec& spec);

  Kernel kernel() const noexcept { return kernel_; }
  double cutoff() const noexcept { return cutoff_; }
  int panels() const noexcept { return panels_; }
  const QuadratureSpec& spec() const noexcept { return spec_; }

  /// int K(t) t^p cosh(x t) cos(y t) dt
  BoundedReal cosh_cos(double x, double y, int power = 0) const;
  /// int K(t) t^p sinh(x t) sin(y t) dt
  BoundedReal sinh_sin(double x, double y, int power = 0) const;
  /// int K(t) t^p cosh(x t) sin(y t) dt
  BoundedReal cosh_sin(double x, double y, int power = 0) const;

  /// (u, v) = (cosh_cos, sinh_sin) with v exactly 0 when x = 0 or y = 0.
  UVValue uv(double x, double y) const;

  /// Row-major (index j * xs.size() + i) evaluation over the tensor grid.
  /// Bit-identical to calling uv() node by node, for any thread count.
  std::vector<UVValue> uv_grid(std::span<const double> xs, std::span<const double> ys,
                               int threads) const;

  /// v along a line with x fixed (vertical) or y fixed, fine rule only and
  /// without a bound; equals uv().v.value at every point. The sampler takes
  /// the free coordinate and shares the per-line precomputation.
  std::function<double(double)> v_line_sampler(bool vertical, double fixed) const;

 private:
  struct Nodes {
    std::vector<long double> t;
    std::vector<long double> c;  // weight * K(t)
  };
  enum class Weight { cosh_cos, sinh_sin, cosh_sin };

  BoundedReal integrate(Weight weight, double x, double y, int power) const;
  double error_floor(double x, int power, long double abs_sum) const;
  void check_box(double x, double y) const;

  Kernel kernel_;
  QuadratureSpec spec_;
  double x_abs_max_;
  double y_abs_max_;
  double cutoff_;
  int panels_;
  bool budget_exceeded_ = false;
  Nodes fine_;
  Nodes coarse_;
};

/// eta(z) along via_G or via_F (oracle_xi is rejected: use xi_oracle).
/// Throws ConvergenceError if the bound exceeds spec.tol or the panel budget
/// is exhausted.
EvalResult eta(Complex z, const QuadratureSpec& spec = {}, Route route = Route::via_G);

/// u(x, y) and v(x, y) with individual bounds; v(0, y) = v(x, 0) = 0 exactly.
UVValue uv(double x, double y, const QuadratureSpec& spec = {});

/// xi(s) through the Psi integral; shares no code path with the G kernel.
EvalResult xi_oracle(Complex s, const QuadratureSpec& spec = {});

/// |(z^2 - 1) int F cosh - (F'(0) + int G cosh)| from the two kernels.
double integration_by_parts_residual(Complex z, const QuadratureSpec& spec = {});

struct CauchyRiemannResidual {
  double r1 = 0.0;  // |u_x - v_y|
  double r2 = 0.0;  // |u_y + v_x|
};

/// Central differences of step h at z; throws UsageError for h <= 0.
CauchyRiemannResidual cauchy_riemann_residual(Complex z, double h, const QuadratureSpec& spec = {});

struct PointRow {
  double x = 0.0;
  double y = 0.0;
  double u = 0.0;
  double v = 0.0;
  double bound = 0.0;
};

/// Batch evaluation of (u, v) at arbitrary points; row order follows input.
std::vector<PointRow> uv_batch(std::span<const Complex> points, const QuadratureSpec& spec = {},
                               int threads = 0);

}  // namespace xilab
