#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace xilab {

/// Gauss-Legendre nodes and weights on [-1, 1], computed and stored in
/// long double.
class GaussLegendreRule {
 public:
  explicit GaussLegendreRule(int order);

  int order() const noexcept { return static_cast<int>(nodes_.size()); }
  const std::vector<long double>& nodes() const noexcept { return nodes_; }
  const std::vector<long double>& weights() const noexcept { return weights_; }

 private:
  std::vector<long double> nodes_;
  std::vector<long double> weights_;
};

/// Shared 20-point rule used by every panel integrator in the library.
const GaussLegendreRule& default_rule();

/// Nodes and weights of a composite rule: [a, b] split into equal panels.
struct PanelNodes {
  std::vector<long double> t;
  std::vector<long double> w;
};

PanelNodes composite_nodes(long double a, long double b, int panels,
                           const GaussLegendreRule& rule = default_rule());

struct AdaptiveResult {
  double value = 0.0;
  double error_estimate = 0.0;
  double abs_integral = 0.0;  // sum |w_i f(t_i)| over the accepted panels
  int panels = 0;
  bool converged = false;
};

/// Adaptive bisection with the default rule: a panel is accepted when its
/// single-panel value and the sum over its halves differ by at most
/// tol * width / (b - a). Starts from `initial_panels` equal panels.
AdaptiveResult adaptive_gauss(const std::function<double(double)>& f, double a, double b, double tol,
                              int initial_panels, int max_panels);

}  // namespace xilab
