#include <doctest.h>

#include <cmath>
#include <complex>

#include "../reference_values.hpp"
#include "xilab/errors.hpp"
#include "xilab/eta_integral.hpp"

using namespace xilab;
namespace ref = xilab::reference;

TEST_CASE("transform round-trips between s and z") {
  const Complex s(0.5, 14.134725);
  const Complex z = transform(s, Direction::s_to_z);
  CHECK(z.real() == doctest::Approx(0.0));
  CHECK(z.imag() == doctest::Approx(28.26945));
  const Complex back = transform(z, Direction::z_to_s);
  CHECK(std::abs(back - s) < 1e-15);
}

TEST_CASE("eta at +-1 and 0") {
  for (double x : {1.0, -1.0}) {
    const EvalResult r = eta({x, 0.0});
    CHECK(std::abs(r.value.real() - 0.5) < 1e-10);
    CHECK(r.value.imag() == 0.0);
    CHECK(r.abs_error_bound <= 1e-10);
  }
  const EvalResult zero = eta({0.0, 0.0});
  CHECK(std::abs(zero.value.real() - ref::eta_0) < 1e-14);
}

TEST_CASE("eta matches frozen oracle values within its reported bound") {
  for (const ref::EtaPoint& p : ref::eta_points) {
    CAPTURE(p.z);
    const EvalResult r = eta(p.z);
    const double err = std::abs(r.value - p.value);
    CHECK(err <= r.abs_error_bound + p.tol);
    CHECK(r.abs_error_bound <= 1e-10);
  }
}

TEST_CASE("G and F routes agree") {
  for (const Complex z : {Complex(0.2, 3.0), Complex(-0.6, 17.0), Complex(0.9, 41.0)}) {
    CAPTURE(z);
    const EvalResult g = eta(z, {}, Route::via_G);
    const EvalResult f = eta(z, {}, Route::via_F);
    CHECK(f.route == Route::via_F);
    CHECK(std::abs(g.value - f.value) <= g.abs_error_bound + f.abs_error_bound);
  }
  CHECK_THROWS_AS(eta({0.0, 1.0}, {}, Route::oracle_xi), UsageError);
}

TEST_CASE("independent Psi-integral oracle agrees") {
  for (const Complex z : {Complex(0.0, 0.0), Complex(0.4, 10.0), Complex(-1.0, 25.0), Complex(0.7, 55.0)}) {
    CAPTURE(z);
    const EvalResult a = eta(z);
    const EvalResult b = xi_oracle(transform(z, Direction::z_to_s));
    CHECK(b.route == Route::oracle_xi);
    CHECK(std::abs(a.value - b.value) < 1e-9);
  }
}

TEST_CASE("eta is even in z and real on both axes") {
  for (const Complex z : {Complex(0.3, 7.0), Complex(0.8, 33.0)}) {
    const Complex a = eta(z).value;
    const Complex b = eta(-z).value;
    const Complex c = eta(std::conj(z)).value;
    CHECK(std::abs(a - b) < 1e-14);
    CHECK(std::abs(c - std::conj(a)) < 1e-14);
  }
  const UVValue on_line = uv(0.0, 42.0);
  CHECK(on_line.v.value == 0.0);
  CHECK(on_line.v.bound == 0.0);
  CHECK(uv(0.6, 0.0).v.value == 0.0);
}

TEST_CASE("integration by parts links the two kernels") {
  for (const Complex z : {Complex(0.0, 5.0), Complex(0.5, 20.0), Complex(-0.9, 40.0)}) {
    CHECK(integration_by_parts_residual(z) < 1e-10);
  }
}

TEST_CASE("Cauchy-Riemann residuals are small and shrink like h^2") {
  const Complex z(0.3, 21.0);
  const CauchyRiemannResidual coarse = cauchy_riemann_residual(z, 1e-3);
  const CauchyRiemannResidual fine = cauchy_riemann_residual(z, 5e-4);
  CHECK(std::max(fine.r1, fine.r2) < 1e-6);
  const double ratio = std::max(coarse.r1, coarse.r2) / std::max(fine.r1, fine.r2);
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
  CHECK_THROWS_AS(cauchy_riemann_residual(z, 0.0), UsageError);
}

TEST_CASE("tail bounds decrease with the cutoff and derive a finite cutoff") {
  double prev = log_tail_bound(Kernel::G, 0.5, 1.0);
  for (double T : {0.75, 1.0, 1.25, 1.5}) {
    const double next = log_tail_bound(Kernel::G, T, 1.0);
    CHECK(next < prev);
    prev = next;
  }
  const double T = cutoff_T(1.0, kTailTarget);
  CHECK(T > 0.5);
  CHECK(T < 3.0);
  CHECK(integrand_bound(T, 1.0) < 1e-30);
  CHECK(cutoff_T(2.0, kTailTarget) >= T);
}

TEST_CASE("quadrature spec validation") {
  QuadratureSpec s;
  s.tol = 0.0;
  CHECK_THROWS_AS(s.validate(), UsageError);
  s = {};
  s.cutoff_T = -1.0;
  CHECK_THROWS_AS(s.validate(), UsageError);
  s = {};
  s.max_panels = 1;
  CHECK_THROWS_AS(s.validate(), UsageError);
  s = {};
  s.max_panel_width = 0.0;
  CHECK_THROWS_AS(s.validate(), UsageError);
  CHECK_NOTHROW(QuadratureSpec{}.validate());
}

TEST_CASE("non-finite input and an exhausted panel budget raise") {
  CHECK_THROWS_AS(eta({std::nan(""), 0.0}), DomainError);
  CHECK_THROWS_AS(eta({0.0, std::numeric_limits<double>::infinity()}), DomainError);
  QuadratureSpec starved;
  starved.max_panels = 2;
  starved.max_panel_width = 1.0;
  CHECK_THROWS_AS(eta({0.0, 90.0}, starved), ConvergenceError);
}

TEST_CASE("kernel quadrature enforces its box and moment range") {
  const KernelQuadrature q(Kernel::G, 1.0, 50.0, {});
  CHECK_THROWS_AS(q.uv(1.5, 10.0), UsageError);
  CHECK_THROWS_AS(q.uv(0.5, 60.0), UsageError);
  CHECK_THROWS_AS(q.cosh_cos(0.5, 10.0, 3), UsageError);
  CHECK(q.cutoff() > 0.0);
  CHECK(q.panels() >= 2);
}

TEST_CASE("moments are consistent with eta derivatives") {
  const KernelQuadrature q(Kernel::G, 1.0, 50.0, {});
  const double y = 17.0;
  const double h = 1e-4;
  const double du = (q.cosh_cos(0.0, y + h).value - q.cosh_cos(0.0, y - h).value) / (2 * h);
  CHECK(std::abs(du + q.cosh_sin(0.0, y, 1).value) < 1e-9);
  const double d2u = (q.cosh_cos(0.0, y + h).value - 2 * q.cosh_cos(0.0, y).value + q.cosh_cos(0.0, y - h).value) / (h * h);
  CHECK(std::abs(d2u + q.cosh_cos(0.0, y, 2).value) < 1e-5);
  const double dv_dx = (q.sinh_sin(h, y).value - q.sinh_sin(-h, y).value) / (2 * h);
  CHECK(std::abs(dv_dx - q.cosh_sin(0.0, y, 1).value) < 1e-9);
}

TEST_CASE("line sampler reproduces uv bit for bit") {
  const KernelQuadrature q(Kernel::G, 1.0, 100.0, {});
  const auto vertical = q.v_line_sampler(true, 0.37);
  const auto horizontal = q.v_line_sampler(false, 64.5);
  for (double y : {0.0, 3.25, 64.5, 99.9}) CHECK(vertical(y) == q.uv(0.37, y).v.value);
  for (double x : {0.0, 0.1, 0.37, 1.0}) CHECK(horizontal(x) == q.uv(x, 64.5).v.value);
  CHECK(q.v_line_sampler(true, 0.0)(12.0) == 0.0);
}

TEST_CASE("grid and batch evaluation are thread-count independent") {
  const KernelQuadrature q(Kernel::G, 1.0, 100.0, {});
  const std::vector<double> xs{0.0, 0.25, 0.5, 1.0};
  const std::vector<double> ys{0.0, 10.0, 55.5, 100.0};
  const auto one = q.uv_grid(xs, ys, 1);
  const auto three = q.uv_grid(xs, ys, 3);
  REQUIRE(one.size() == 16);
  for (std::size_t k = 0; k < one.size(); ++k) {
    CHECK(one[k].u.value == three[k].u.value);
    CHECK(one[k].v.value == three[k].v.value);
    const UVValue single = q.uv(xs[k % 4], ys[k / 4]);
    CHECK(one[k].u.value == single.u.value);
  }
  const std::vector<Complex> pts{{0.1, 2.0}, {0.9, 80.0}, {-0.4, 30.0}};
  const auto b1 = uv_batch(pts, {}, 1);
  const auto b2 = uv_batch(pts, {}, 2);
  REQUIRE(b1.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(b1[k].x == pts[k].real());
    CHECK(b1[k].u == b2[k].u);
    CHECK(b1[k].v == b2[k].v);
  }
}
