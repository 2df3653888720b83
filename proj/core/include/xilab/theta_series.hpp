#pragma once

// Theta-type series behind the xi-function kernel.
//
//   Psi(tau) = sum_{n>=1} exp(-pi n^2 tau)
//   F(t)     = Psi(e^{4t}) e^t         = sum exp(t - w_n)
//   G(t)     = F''(t) - F(t)           = sum exp(t - w_n) (16 w_n^2 - 24 w_n)
//
// with w_n = pi n^2 e^{4t}. Every term of F, G and their t-derivatives has the
// shape exp(t - w) P(w) for a polynomial P, and d/dt maps P to
// (1 - 4w) P + 4w P'. All evaluators return the partial sum together with a
// certified bound on the discarded tail.

#include <cmath>
#include <numbers>

namespace xilab {

/// Geometric ratio bound for consecutive G-series terms at t >= 0:
/// |term_{n+1} / term_n| <= 28 exp(-3 pi).
inline const double kRatioBound = 28.0 * std::exp(-3.0 * std::numbers::pi);

struct TruncationPolicy {
  double tol = 1e-16;
  /// Direct summation is used down to t = -t_neg_max; below that the
  /// even/odd symmetry of G is used and F is rejected.
  double t_neg_max = 1.0;
  int max_terms = 400;

  static double ratio_bound() noexcept { return kRatioBound; }
};

struct TruncatedValue {
  double value = 0.0;
  int terms_used = 0;
  double tail_bound = 0.0;
};

/// Psi(tau). For tau < 1 the Jacobi relation
/// 2 Psi(tau) + 1 = tau^{-1/2} (2 Psi(1/tau) + 1) restores fast decay.
/// Throws DomainError for tau <= 0, ConvergenceError if tol is unreachable.
TruncatedValue psi(double tau, const TruncationPolicy& policy = {});

/// d^k Psi / d tau^k for k in {0, 1, 2}, by direct summation (tau >= 1/4).
TruncatedValue psi_derivative(double tau, int order, const TruncationPolicy& policy = {});

/// F(t), F'(t) or F''(t) (order 0, 1, 2). Throws UsageError for any other
/// order and DomainError for t < -policy.t_neg_max.
TruncatedValue f_kernel(double t, int order, const TruncationPolicy& policy = {});

/// G(t) from the exp(t - w)(16 w^2 - 24 w) series.
TruncatedValue g_kernel(double t, const TruncationPolicy& policy = {});

/// G(t) via e^t [16 tau^2 Psi''(tau) + 24 tau Psi'(tau)], tau = e^{4t}.
/// Independent arithmetic path used to cross-check g_kernel.
TruncatedValue g_kernel_tau_form(double t, const TruncationPolicy& policy = {});

/// G'(t) (order 1) or G'''(t) (order 3), term-wise analytic derivatives.
TruncatedValue g_kernel_derivative(double t, int order, const TruncationPolicy& policy = {});

/// Smallest number of G terms whose certified tail is below policy.tol.
int terms_needed(double t, const TruncationPolicy& policy = {});

/// log|n-th term of the G series| at t; -inf where the term vanishes.
double g_term_log_magnitude(double t, int n);

/// Series selectable for extended-precision evaluation.
enum class SeriesKind { F, F1, F2, G, G1, G3 };

/// The selected series summed in long double with the same tail rules as
/// the binary64 evaluators (G and its odd derivatives are reflected for
/// t < -1). The quadrature layer samples its kernels through this.
long double series_extended(SeriesKind kind, long double t, long double tol);

/// Psi(tau) in long double for tau >= 1, direct summation.
long double psi_extended(long double tau, long double tol);

}  // namespace xilab
