#pragma once

// Sign structure of u and v over a rectangle of the quadrant x >= 0, y >= 0,
// the v = 0 curves leaving the critical line, and audits along them.
//
// Grids are stored row-major: node (i, j) at x_i = x_min + i dx, y_j = y_min + j dy
// lives at index j * nx + i.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "xilab/critical_line.hpp"
#include "xilab/eta_integral.hpp"

namespace xilab {

struct Region {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 100.0;
  int nx = 128;
  int ny = 512;

  /// Throws UsageError unless 0 <= x_min < x_max <= 2, y_min < y_max,
  /// y_min >= 0 and nx, ny >= 2.
  void validate() const;
  double dx() const { return (x_max - x_min) / (nx - 1); }
  double dy() const { return (y_max - y_min) / (ny - 1); }
  double x(int i) const { return i == nx - 1 ? x_max : x_min + i * dx(); }
  double y(int j) const { return j == ny - 1 ? y_max : y_min + j * dy(); }
};

enum class Field { u, v };

struct StripGrid {
  Region region;
  std::vector<UVValue> nodes;

  const UVValue& at(int i, int j) const { return nodes[static_cast<std::size_t>(j) * region.nx + i]; }
};

/// u and v at every node of the region, in parallel over rows.
StripGrid evaluate_strip(const Region& region, const QuadratureSpec& spec = {}, int threads = 0);

struct SignGrid {
  Region region;
  Field field = Field::v;
  std::vector<std::int8_t> signs;  // 0 inside the per-node error band
  std::vector<double> values;
  std::vector<double> bounds;
  double bound = 0.0;  // max of bounds

  int sign(int i, int j) const { return signs[index(i, j)]; }
  double value(int i, int j) const { return values[index(i, j)]; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * region.nx + i; }
};

SignGrid sign_grid(const StripGrid& strip, Field field);
SignGrid sign_grid(const Region& region, Field field, const QuadratureSpec& spec = {}, int threads = 0);
/// From externally supplied values (row-major), e.g. synthetic fixtures.
SignGrid make_sign_grid(const Region& region, Field field, std::vector<double> values, std::vector<double> bounds);

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
};

struct Curve {
  std::vector<CurvePoint> points;  // ordered from the end nearest x = x_min
  std::vector<double> u_values;
  std::vector<double> v_values;
  std::vector<std::int64_t> edges;  // grid edge carrying each point
  double v_residual_max = 0.0;
  double u_min_abs = 0.0;
  int u_sign = 0;  // 0 when u changes sign along the sample
  bool closed = false;
  /// A saddle cell on the curve could not be resolved by its centre sample,
  /// or an edge refinement did not converge.
  bool flagged = false;
  std::optional<StationaryPoint> start_anchor;
};

/// Returns (u, v) at a point; used for centre samples and refined crossings.
using FieldEvaluator = std::function<UVValue(double x, double y)>;
/// Optional fast v along a grid line (x fixed when vertical, else y fixed),
/// returning a function of the free coordinate; used inside edge refinement.
using LineSampler = std::function<std::function<double(double)>(bool vertical, double fixed)>;

/// Marching squares on the v grid. Cells touching an exactly-zero node (the
/// x = 0 column and y = 0 row) are skipped; saddle cells are split by the sign
/// of v at the cell centre. Every crossing is refined along its edge to
/// refine_tol times the edge length.
std::vector<Curve> trace_curves(const SignGrid& v_grid, double refine_tol, const FieldEvaluator& evaluate,
                                int threads = 0, const LineSampler& line = {});
std::vector<Curve> trace_curves(const SignGrid& v_grid, double refine_tol, const QuadratureSpec& spec = {},
                                int threads = 0);

/// Attaches to each curve that starts at the left edge the stationary point
/// of u(0, .) nearest its first point, within max(2 dy, 0.1).
void attach_anchors(std::vector<Curve>& curves, const Region& region, std::span<const StationaryPoint> anchors);

struct CurveAudit {
  int u_sign = 0;
  bool u_sign_constant = false;
  double u_min_abs = 0.0;
  double v_residual_max = 0.0;
  /// Sign of (u_{k+1} - u_k) / (x_{k+1} - x_k) per polyline segment; 0 where
  /// the segment is vertical.
  std::vector<int> du_dx_signs;
  int increasing = 0;
  int decreasing = 0;
  bool anchored = false;
  /// u keeps the sign of u at the anchor (negative_min -> -1, positive_max -> +1).
  bool matches_anchor = false;
};

CurveAudit curve_audit(const Curve& curve);

struct ModulusMinimum {
  double min_mod = 0.0;
  double x = 0.0;
  double y = 0.0;
  double bound = 0.0;  // error bound of |eta| at the argmin
  std::size_t nodes = 0;
};

/// min |eta| over grid nodes with x > x_exclusion. Throws UsageError when no
/// node qualifies.
ModulusMinimum off_line_min_modulus(const StripGrid& strip, double x_exclusion = 0.0);
ModulusMinimum off_line_min_modulus(const Region& region, double x_exclusion = 0.0, const QuadratureSpec& spec = {},
                                    int threads = 0);

enum class AnomalyKind { join, bifurcation };
const char* to_string(AnomalyKind kind) noexcept;

struct Anomaly {
  AnomalyKind kind = AnomalyKind::join;
  double x = 0.0;
  double y = 0.0;
  int curve_a = -1;
  int curve_b = -1;
  double distance_cells = 0.0;  // join: closest approach in cell units
  double u = 0.0;               // u at the nearest traced point, NaN if none
  std::array<double, 4> v_corners{};  // bifurcation: v at (i,j), (i+1,j), (i+1,j+1), (i,j+1)
};

/// Advisory flags: saddle cells of the v sign pattern (candidate bifurcation)
/// and distinct curves closer than one cell diagonal away from saddle cells
/// (candidate join).
std::vector<Anomaly> anomaly_scan(std::span<const Curve> curves, const SignGrid& v_grid);

struct EpsilonBand {
  double x = 0.0;
  double min_slope = 0.0;  // min |v| / x over the column, y = 0 excluded
  double y_at_min = 0.0;
};

/// |v| / x on the first column with x > 0, a proxy for |u_y(0, y)|.
EpsilonBand epsilon_band(const StripGrid& strip);

}  // namespace xilab
