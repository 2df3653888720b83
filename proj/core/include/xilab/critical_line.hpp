#pragma once

// Behaviour of eta on the critical line x = 0, where eta(iy) = u(0, y) is real:
// zeros, their simplicity, stationary points of u, the alternating-interval
// aggregates p(y), q(y) with u = p - q, and the second-order ODE residual.

#include <span>
#include <vector>

#include "xilab/eta_integral.hpp"
#include "xilab/root_finding.hpp"

namespace xilab {

struct ZeroRecord {
  double y = 0.0;
  double t_zeta = 0.0;  // y / 2
  double y_lo = 0.0;
  double y_hi = 0.0;
  double residual = 0.0;  // |u(0, y)|
  double u_deriv = 0.0;   // |du/dy| at y
  bool simple = false;
};

enum class StationaryKind {
  positive_max,
  negative_min,
  // u and u'' do not have opposite signs; reported, never expected.
  anomalous,
};

const char* to_string(StationaryKind kind) noexcept;

struct StationaryPoint {
  double y_m = 0.0;
  double u_value = 0.0;
  double u_deriv = 0.0;
  double curvature = 0.0;  // d2u/dy2 at y_m
  StationaryKind kind = StationaryKind::anomalous;
};

struct SimplicityReport {
  double y0 = 0.0;
  double residual = 0.0;
  double u_deriv = 0.0;
  double envelope = 0.0;  // max |u| over [y0 - 2, y0 + 2]
  int sign_below = 0;     // sign of u(y0 - h)
  int sign_above = 0;
  bool residual_ok = false;
  bool simple = false;
};

struct PQValue {
  double y = 0.0;
  double p = 0.0;
  double q = 0.0;
  double diff = 0.0;
  int intervals_used = 0;
  double tail_bound = 0.0;
  double p_bound = 0.0;  // quadrature + rounding, tail excluded
  double q_bound = 0.0;
};

struct PQPolicy {
  double y_floor = 5.0;
  /// Quadrature sub-panel width in units of t / y.
  double panel_width = 0.05;
  /// Target for the discarded tail past K pi when K is derived.
  double tail_tol = 1e-30;
};

struct LineOptions {
  QuadratureSpec spec{};
  int threads = 0;
  /// Simplicity threshold relative to the local envelope of |u|.
  double simplicity_margin = 1e-4;
  double envelope_halfwidth = 2.0;
  /// Neighbour offset for the sign test in classify_zero.
  double neighbour_h = 0.01;
};

/// u(0, y) sampler sized for |y| <= y_max; derivatives by differentiating
/// under the integral.
class CriticalLine {
 public:
  explicit CriticalLine(double y_max, const QuadratureSpec& spec = {});

  double y_max() const noexcept { return y_max_; }
  /// u (order 0), du/dy = -int t G sin(yt) (order 1), d2u/dy2 = -int t^2 G cos(yt) (order 2).
  BoundedReal u(double y, int order = 0) const;

 private:
  double y_max_;
  KernelQuadrature quad_;
};

BoundedReal u_line(double y, int order, const QuadratureSpec& spec = {});

/// Sign changes of u(0, .) on the sample grid y_min, y_min + step, ..., y_max,
/// each refined to a bracket narrower than tol. Sorted by y.
std::vector<ZeroRecord> scan_zeros(double y_min, double y_max, double step, double tol,
                                   const LineOptions& options = {});

/// Bracketed refinement; throws UsageError without a sign change.
BracketedRoot refine_zero(const CriticalLine& line, double lo, double hi, double tol);
double refine_zero(double lo, double hi, double tol, const LineOptions& options = {});

SimplicityReport classify_zero(const CriticalLine& line, double y0, double h, double margin,
                               double envelope_halfwidth = 2.0);
SimplicityReport classify_zero(double y0, double h, double margin, const LineOptions& options = {});

/// Roots of du/dy on the sample grid (y = 0 is a root by symmetry).
std::vector<StationaryPoint> stationary_points(double y_min, double y_max, double step, double tol,
                                               const LineOptions& options = {});

/// p(y), q(y) from K half-periods of G'(t/y) sin t; K <= 0 derives K from
/// policy.tail_tol. Throws UsageError below y_floor and CoverageError when
/// the tail past K pi exceeds policy.tail_tol.
PQValue pq(double y, int K = 0, const PQPolicy& policy = {});

struct PQRow {
  PQValue value;
  double scaled_p = 0.0;  // pi y p / G(0)
};

std::vector<PQRow> pq_table(std::span<const double> ys, int K = 0, const PQPolicy& policy = {},
                            int threads = 0);

struct OdeResidual {
  double y = 0.0;
  double f = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  double f1_central = 0.0;  // (f(y + h) - f(y - h)) / 2h
  double R = 0.0;           // f'' + 6 f'/y + 4 f/y^2
  double envelope = 0.0;
  double ratio = 0.0;  // |R| y^3 / envelope
};

/// Diagnostic only. Throws UsageError for y < 10 or h <= 0.
OdeResidual ode_residual(double y, double h, const QuadratureSpec& spec = {});

}  // namespace xilab
