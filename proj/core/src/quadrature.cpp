#include "xilab/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "xilab/compensated_sum.hpp"
#include "xilab/errors.hpp"

namespace xilab {

GaussLegendreRule::GaussLegendreRule(int order) {
  if (order < 1) throw UsageError("Gauss-Legendre order must be positive");
  using Real = long double;
  nodes_.resize(order);
  weights_.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration on P_n from the usual cosine initial guess.
    Real x = std::cos(std::numbers::pi_v<Real> * (i + 0.75L) / (order + 0.5L));
    Real dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1;
      Real p1 = x;
      for (int k = 2; k <= order; ++k) {
        const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
      dp = order * (x * p1 - p0) / (x * x - 1);
      const Real dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 4 * std::numeric_limits<Real>::epsilon()) break;
    }
    nodes_[i] = -x;
    nodes_[order - 1 - i] = x;
    const Real w = 2 / ((1 - x * x) * dp * dp);
    weights_[i] = w;
    weights_[order - 1 - i] = w;
  }
  if (order % 2 == 1) nodes_[order / 2] = 0;
}

const GaussLegendreRule& default_rule() {
  static const GaussLegendreRule rule(20);
  return rule;
}

PanelNodes composite_nodes(long double a, long double b, int panels, const GaussLegendreRule& rule) {
  if (panels < 1) throw UsageError("composite_nodes: panel count must be positive");
  PanelNodes out;
  const auto n = static_cast<std::size_t>(rule.order());
  out.t.reserve(n * panels);
  out.w.reserve(n * panels);
  const long double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const long double lo = a + width * p;
    const long double mid = lo + width / 2;
    for (std::size_t k = 0; k < n; ++k) {
      out.t.push_back(mid + width / 2 * rule.nodes()[k]);
      out.w.push_back(width / 2 * rule.weights()[k]);
    }
  }
  return out;
}

namespace {

struct PanelSum {
  double value;
  double abs_value;
};

PanelSum gauss_panel(const std::function<double(double)>& f, double lo, double hi) {
  const GaussLegendreRule& rule = default_rule();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  CompensatedSum<double> sum;
  double abs_sum = 0.0;
  for (int k = 0; k < rule.order(); ++k) {
    const double node = mid + half * static_cast<double>(rule.nodes()[k]);
    const double term = half * static_cast<double>(rule.weights()[k]) * f(node);
    sum.add(term);
    abs_sum += std::abs(term);
  }
  return {sum.value(), abs_sum};
}

}  // namespace

AdaptiveResult adaptive_gauss(const std::function<double(double)>& f, double a, double b, double tol,
                              int initial_panels, int max_panels) {
  if (!(tol > 0.0)) throw UsageError("adaptive_gauss: tol must be positive");
  if (initial_panels < 1) initial_panels = 1;
  struct Panel {
    double lo, hi;
    PanelSum whole;
  };
  std::vector<Panel> pending;
  const double width = (b - a) / initial_panels;
  for (int p = initial_panels - 1; p >= 0; --p) {
    const double lo = a + width * p;
    const double hi = p + 1 == initial_panels ? b : lo + width;
    pending.push_back({lo, hi, gauss_panel(f, lo, hi)});
  }
  AdaptiveResult result;
  result.converged = true;
  CompensatedSum<double> total;
  int panel_count = initial_panels;
  const double length = b - a;
  // Depth-first, left to right, so the accumulation order is deterministic.
  while (!pending.empty()) {
    Panel panel = pending.back();
    pending.pop_back();
    const double mid = 0.5 * (panel.lo + panel.hi);
    const PanelSum left = gauss_panel(f, panel.lo, mid);
    const PanelSum right = gauss_panel(f, mid, panel.hi);
    const double refined = left.value + right.value;
    const double diff = std::abs(refined - panel.whole.value);
    const double budget = tol * (panel.hi - panel.lo) / length;
    if (diff <= budget || panel_count >= max_panels) {
      if (diff > budget) result.converged = false;
      total.add(refined);
      result.error_estimate += diff;
      result.abs_integral += left.abs_value + right.abs_value;
      ++result.panels;
      continue;
    }
    ++panel_count;
    pending.push_back({mid, panel.hi, right});
    pending.push_back({panel.lo, mid, left});
  }
  result.value = total.value();
  return result;
}

}  // namespace xilab
