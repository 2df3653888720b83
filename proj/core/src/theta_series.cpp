#include "xilab/theta_series.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>

#include "xilab/compensated_sum.hpp"
#include "xilab/errors.hpp"

namespace xilab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxDegree = 8;

// Coefficients c_0..c_d of P(w) = sum c_j w^j.
struct TermPolynomial {
  std::array<double, kMaxDegree + 1> c{};
  int degree = 0;

  template <class Real>
  Real operator()(Real w) const noexcept {
    Real acc = 0;
    for (int j = degree; j >= 0; --j) acc = acc * w + static_cast<Real>(c[j]);
    return acc;
  }

  // Majorant Q(w) = sum |c_j| w^j; Q(lambda w) <= lambda^degree Q(w) for lambda >= 1.
  template <class Real>
  Real majorant(Real w) const noexcept {
    Real acc = 0;
    for (int j = degree; j >= 0; --j) acc = acc * w + static_cast<Real>(std::abs(c[j]));
    return acc;
  }
};

// d/dt [exp(t - w) P(w)] = exp(t - w) [(1 - 4w) P(w) + 4w P'(w)], w' = 4w.
constexpr TermPolynomial differentiate(const TermPolynomial& p) {
  TermPolynomial out;
  out.degree = p.degree + 1;
  for (int j = 0; j <= out.degree; ++j) {
    const double same = j <= p.degree ? p.c[j] * (1.0 + 4.0 * j) : 0.0;
    const double shifted = j >= 1 ? 4.0 * p.c[j - 1] : 0.0;
    out.c[j] = same - shifted;
  }
  return out;
}

constexpr TermPolynomial f_polynomial(int order) {
  TermPolynomial p;
  p.c[0] = 1.0;
  for (int k = 0; k < order; ++k) p = differentiate(p);
  return p;
}

constexpr TermPolynomial g_polynomial(int order) {
  TermPolynomial p;
  p.degree = 2;
  p.c[1] = -24.0;
  p.c[2] = 16.0;
  for (int k = 0; k < order; ++k) p = differentiate(p);
  return p;
}

enum class TailRule {
  // |term_N| r / (1 - r); valid for the G series when t >= 0.
  fixed_ratio,
  // Majorant b_N = exp(a - w_N) Q(w_N) with the decreasing ratio
  // exp(-pi s (2N+1)) ((N+1)/N)^{2d}; valid for any scale s > 0.
  majorant_ratio,
};

template <class Real>
struct SeriesSum {
  Real value;
  int terms;
  Real tail;
};

// Sums exp(log_prefactor - w_n) P(w_n), w_n = pi n^2 scale, n = 1, 2, ...
template <class Real>
SeriesSum<Real> sum_series(Real log_prefactor, Real scale, const TermPolynomial& poly, TailRule rule,
                           Real tol, int max_terms, const char* name) {
  using std::abs, std::exp, std::pow;
  if (!(tol > 0)) throw UsageError(std::string(name) + ": tol must be positive");
  const Real pi = std::numbers::pi_v<Real>;
  const Real r = static_cast<Real>(28) * exp(-3 * pi);
  CompensatedSum<Real> sum;
  Real tail = std::numeric_limits<Real>::infinity();
  for (int n = 1; n <= max_terms; ++n) {
    const Real nn = static_cast<Real>(n);
    const Real w = pi * nn * nn * scale;
    const Real envelope = exp(log_prefactor - w);
    const Real term = envelope * poly(w);
    sum.add(term);
    if (rule == TailRule::fixed_ratio) {
      tail = abs(term) * r / (1 - r);
    } else {
      const Real rho = exp(-pi * scale * (2 * nn + 1)) * pow((nn + 1) / nn, static_cast<Real>(2 * poly.degree));
      tail = rho < 1 ? envelope * poly.majorant(w) * rho / (1 - rho) : std::numeric_limits<Real>::infinity();
    }
    if (tail <= tol) return {sum.value(), n, tail};
  }
  throw ConvergenceError(std::string(name) + ": tolerance not reached within max_terms",
                         static_cast<double>(sum.value()), static_cast<double>(tail));
}

TruncatedValue sum_series(double log_prefactor, double scale, const TermPolynomial& poly, TailRule rule,
                          const TruncationPolicy& policy, const char* name) {
  const SeriesSum<double> s = sum_series<double>(log_prefactor, scale, poly, rule, policy.tol, policy.max_terms, name);
  return {s.value, s.terms, s.tail};
}

TruncatedValue psi_direct(double tau, int order, const TruncationPolicy& policy) {
  TermPolynomial p;
  p.degree = order;
  p.c[order] = std::pow(-1.0 / tau, order);
  return sum_series(0.0, tau, p, TailRule::majorant_ratio, policy, "psi");
}

constexpr std::array<TermPolynomial, 4> kGPolys = {g_polynomial(0), g_polynomial(1), g_polynomial(2),
                                                   g_polynomial(3)};
constexpr std::array<TermPolynomial, 3> kFPolys = {f_polynomial(0), f_polynomial(1), f_polynomial(2)};

TruncatedValue g_series(double t, int order, const TruncationPolicy& policy) {
  const TailRule rule = (order == 0 && t >= 0.0) ? TailRule::fixed_ratio : TailRule::majorant_ratio;
  return sum_series(t, std::exp(4.0 * t), kGPolys[order], rule, policy, "G");
}

}  // namespace

TruncatedValue psi(double tau, const TruncationPolicy& policy) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("psi: tau must be positive and finite");
  if (tau >= 1.0) return psi_direct(tau, 0, policy);
  // 2 Psi(tau) + 1 = tau^{-1/2} (2 Psi(1/tau) + 1)
  const double scale = 1.0 / std::sqrt(tau);
  TruncationPolicy inner = policy;
  inner.tol = policy.tol / scale;
  const TruncatedValue dual = psi_direct(1.0 / tau, 0, inner);
  return {0.5 * (scale * (2.0 * dual.value + 1.0) - 1.0), dual.terms_used, scale * dual.tail_bound};
}

TruncatedValue psi_derivative(double tau, int order, const TruncationPolicy& policy) {
  if (order < 0 || order > 2) throw UsageError("psi_derivative: order must be 0, 1 or 2");
  if (!(tau >= 0.25) || !std::isfinite(tau)) throw DomainError("psi_derivative: tau must be >= 1/4");
  return psi_direct(tau, order, policy);
}

TruncatedValue f_kernel(double t, int order, const TruncationPolicy& policy) {
  if (order < 0 || order > 2) throw UsageError("F: order must be 0, 1 or 2");
  if (!std::isfinite(t) || t < -policy.t_neg_max) throw DomainError("F: t below the supported range");
  return sum_series(t, std::exp(4.0 * t), kFPolys[order], TailRule::majorant_ratio, policy, "F");
}

TruncatedValue g_kernel(double t, const TruncationPolicy& policy) {
  if (!std::isfinite(t)) throw DomainError("G: t must be finite");
  // G is even.
  if (t < -policy.t_neg_max) t = -t;
  return g_series(t, 0, policy);
}

TruncatedValue g_kernel_tau_form(double t, const TruncationPolicy& policy) {
  if (!std::isfinite(t)) throw DomainError("G: t must be finite");
  const double tau = std::exp(4.0 * t);
  const double et = std::exp(t);
  TruncationPolicy inner = policy;
  inner.tol = policy.tol / (et * (16.0 * tau * tau + 24.0 * tau));
  const TruncatedValue d1 = psi_derivative(tau, 1, inner);
  const TruncatedValue d2 = psi_derivative(tau, 2, inner);
  return {et * (16.0 * tau * tau * d2.value + 24.0 * tau * d1.value),
          std::max(d1.terms_used, d2.terms_used),
          et * (16.0 * tau * tau * d2.tail_bound + 24.0 * tau * d1.tail_bound)};
}

TruncatedValue g_kernel_derivative(double t, int order, const TruncationPolicy& policy) {
  if (order != 1 && order != 3) throw UsageError("G derivative: order must be 1 or 3");
  if (!std::isfinite(t)) throw DomainError("G derivative: t must be finite");
  if (t < -policy.t_neg_max) {
    // Odd-order derivatives of an even function are odd.
    TruncatedValue mirrored = g_series(-t, order, policy);
    mirrored.value = -mirrored.value;
    return mirrored;
  }
  return g_series(t, order, policy);
}

int terms_needed(double t, const TruncationPolicy& policy) {
  return g_kernel(t, policy).terms_used;
}

double g_term_log_magnitude(double t, int n) {
  const double nn = static_cast<double>(n);
  const double w = kPi * nn * nn * std::exp(4.0 * t);
  const double poly = std::abs(16.0 * w * w - 24.0 * w);
  if (poly == 0.0) return -std::numeric_limits<double>::infinity();
  return t - w + std::log(poly);
}

long double psi_extended(long double tau, long double tol) {
  if (!(tau >= 1) || !std::isfinite(tau)) throw DomainError("psi_extended: tau must be >= 1");
  TermPolynomial one;
  one.c[0] = 1.0;
  return sum_series<long double>(0, tau, one, TailRule::majorant_ratio, tol, TruncationPolicy{}.max_terms, "psi")
      .value;
}

long double series_extended(SeriesKind kind, long double t, long double tol) {
  if (!std::isfinite(t)) throw DomainError("series_extended: t must be finite");
  const TruncationPolicy defaults;
  bool odd = false;
  const TermPolynomial* poly = nullptr;
  switch (kind) {
    case SeriesKind::F: poly = &kFPolys[0]; break;
    case SeriesKind::F1: poly = &kFPolys[1]; break;
    case SeriesKind::F2: poly = &kFPolys[2]; break;
    case SeriesKind::G: poly = &kGPolys[0]; break;
    case SeriesKind::G1: poly = &kGPolys[1]; odd = true; break;
    case SeriesKind::G3: poly = &kGPolys[3]; odd = true; break;
  }
  const bool is_f = kind == SeriesKind::F || kind == SeriesKind::F1 || kind == SeriesKind::F2;
  long double sign = 1;
  if (t < -defaults.t_neg_max) {
    if (is_f) throw DomainError("F: t below the supported range");
    t = -t;
    if (odd) sign = -1;
  }
  const TailRule rule = (kind == SeriesKind::G && t >= 0) ? TailRule::fixed_ratio : TailRule::majorant_ratio;
  const SeriesSum<long double> s =
      sum_series<long double>(t, std::exp(4 * t), *poly, rule, tol, defaults.max_terms, "series_extended");
  return sign * s.value;
}

}  // namespace xilab
