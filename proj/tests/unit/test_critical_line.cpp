#include <doctest.h>

#include <cmath>
#include <vector>

#include "../reference_values.hpp"
#include "xilab/critical_line.hpp"
#include "xilab/errors.hpp"
#include "xilab/root_finding.hpp"
#include "xilab/theta_series.hpp"

using namespace xilab;
namespace ref = xilab::reference;

TEST_CASE("Brent finds roots of simple functions and rejects bad brackets") {
  const auto f = [](double x) { return std::cos(x) - x; };
  const BracketedRoot r = brent_root(f, 0.0, 1.0, f(0.0), f(1.0), 1e-14);
  CHECK(std::abs(r.root - 0.7390851332151607) < 1e-14);
  CHECK(r.lo <= r.root);
  CHECK(r.root <= r.hi);
  CHECK(r.hi - r.lo < 1e-13);
  const auto g = [](double x) { return x * x + 1.0; };
  CHECK_THROWS_AS(brent_root(g, -1.0, 1.0, 2.0, 2.0, 1e-10), UsageError);
  CHECK_THROWS_AS(brent_root(f, 0.0, 1.0, f(0.0), f(1.0), 0.0), UsageError);
}

TEST_CASE("u on the critical line is even and its derivatives match differences") {
  const CriticalLine line(60.0);
  CHECK(line.u(0.0).value == doctest::Approx(ref::eta_0).epsilon(1e-14));
  CHECK(line.u(0.0, 1).value == 0.0);
  for (double y : {5.0, 23.0, 47.5}) {
    CHECK(line.u(-y).value == line.u(y).value);
    const double h = 1e-4;
    const double d1 = (line.u(y + h).value - line.u(y - h).value) / (2 * h);
    CHECK(std::abs(d1 - line.u(y, 1).value) < 1e-9);
  }
  CHECK_THROWS_AS(line.u(1.0, 3), UsageError);
  CHECK_THROWS_AS(u_line(std::nan(""), 0), DomainError);
}

TEST_CASE("u' at the first two zeros matches the oracle") {
  const CriticalLine line(50.0);
  CHECK(std::abs(line.u(ref::zeros[0], 1).value - ref::du_dy_zero1) < 1e-12);
  CHECK(std::abs(line.u(ref::zeros[1], 1).value - ref::du_dy_zero2) < 1e-13);
}

TEST_CASE("scan finds the ten zeros below y = 100, all simple") {
  const std::vector<ZeroRecord> zeros = scan_zeros(0.0, 100.0, 0.5, 1e-8);
  REQUIRE(zeros.size() == 10);
  for (std::size_t k = 0; k < zeros.size(); ++k) {
    CAPTURE(k);
    // the last zeros sit where |u'| ~ 1e-14 and the quadrature noise limits them
    CHECK(std::abs(zeros[k].y - ref::zeros[k]) < (k < 8 ? 1e-8 : 1e-6));
    CHECK(zeros[k].simple);
    CHECK(zeros[k].t_zeta == zeros[k].y / 2.0);
    CHECK(zeros[k].y_lo <= zeros[k].y);
    CHECK(zeros[k].y <= zeros[k].y_hi);
  }
}

TEST_CASE("scan is empty where u has no sign change, and validates arguments") {
  CHECK(scan_zeros(0.0, 20.0, 0.5, 1e-8).empty());
  CHECK_THROWS_AS(scan_zeros(0.0, 20.0, 0.0, 1e-8), UsageError);
  CHECK_THROWS_AS(scan_zeros(0.0, 20.0, 0.5, 0.0), UsageError);
  CHECK_THROWS_AS(scan_zeros(30.0, 20.0, 0.5, 1e-8), UsageError);
  CHECK_THROWS_AS(scan_zeros(-1.0, 20.0, 0.5, 1e-8), UsageError);
}

TEST_CASE("refine_zero and its bracket contract") {
  CHECK(std::abs(refine_zero(28.0, 28.5, 1e-10) - ref::zeros[0]) < 1e-9);
  CHECK(std::abs(refine_zero(28.5, 28.0, 1e-10) - ref::zeros[0]) < 1e-9);
  CHECK_THROWS_AS(refine_zero(30.0, 31.0, 1e-10), UsageError);
  CHECK_THROWS_AS(refine_zero(28.0, 28.5, 0.0), UsageError);
}

TEST_CASE("classify_zero accepts a true zero and rejects an ordinary point") {
  const SimplicityReport good = classify_zero(ref::zeros[0], 0.01, 1e-4);
  CHECK(good.residual_ok);
  CHECK(good.simple);
  CHECK(good.sign_below == 1);
  CHECK(good.sign_above == -1);
  CHECK(good.u_deriv > 1e-4 * good.envelope);
  const SimplicityReport bad = classify_zero(30.0, 0.01, 1e-4);
  CHECK_FALSE(bad.residual_ok);
  CHECK_FALSE(bad.simple);
  CHECK_THROWS_AS(classify_zero(30.0, 0.0, 1e-4), UsageError);
}

TEST_CASE("stationary points interlace the zeros with the right kind") {
  const std::vector<ZeroRecord> zeros = scan_zeros(0.0, 100.0, 0.5, 1e-8);
  const std::vector<StationaryPoint> st = stationary_points(0.0, 100.0, 0.5, 1e-9);
  REQUIRE(zeros.size() == 10);
  REQUIRE_FALSE(st.empty());
  CHECK(st.front().y_m == 0.0);
  CHECK(st.front().kind == StationaryKind::positive_max);
  for (const StationaryPoint& s : st) CHECK(s.kind != StationaryKind::anomalous);
  for (std::size_t k = 0; k + 1 < zeros.size(); ++k) {
    int inside = 0;
    for (const StationaryPoint& s : st) {
      if (s.y_m > zeros[k].y && s.y_m < zeros[k + 1].y) {
        ++inside;
        const double mid = 0.5 * (zeros[k].y + zeros[k + 1].y);
        const bool positive = u_line(mid, 0).value > 0.0;
        CHECK(s.kind == (positive ? StationaryKind::positive_max : StationaryKind::negative_min));
      }
    }
    CHECK(inside == 1);
  }
  CHECK(std::string(to_string(StationaryKind::negative_min)) == "negative_min");
}

TEST_CASE("p - q reproduces u within the combined bounds") {
  for (double y : {10.0, 30.0, 60.0, 100.0}) {
    CAPTURE(y);
    const PQValue v = pq(y);
    const BoundedReal u = u_line(y, 0);
    CHECK(v.p > 0.0);
    CHECK(v.q > 0.0);
    CHECK(v.diff == v.p - v.q);
    CHECK(std::abs(v.diff - u.value) <= v.p_bound + v.q_bound + v.tail_bound + u.bound + 4e-16 * v.p);
    CHECK(v.tail_bound <= PQPolicy{}.tail_tol);
  }
}

TEST_CASE("pi y p / G(0) tends to one") {
  const std::vector<double> ys{50.0, 100.0, 200.0};
  const std::vector<PQRow> rows = pq_table(ys, 0, {}, 2);
  REQUIRE(rows.size() == 3);
  const double g0 = g_kernel(0.0).value;
  for (const PQRow& r : rows) CHECK(r.scaled_p == doctest::Approx(M_PI * r.value.y * r.value.p / g0));
  CHECK(std::abs(rows[1].scaled_p - 1.0) <= 0.05);
  CHECK(std::abs(rows[2].scaled_p - 1.0) < std::abs(rows[1].scaled_p - 1.0));
  CHECK(std::abs(rows[0].scaled_p - 1.0) > std::abs(rows[1].scaled_p - 1.0));
}

TEST_CASE("pq refuses too few intervals and too small y") {
  try {
    (void)pq(30.0, 3);
    FAIL("expected CoverageError");
  } catch (const CoverageError& e) {
    CHECK(e.partial_tail_bound() > PQPolicy{}.tail_tol);
  }
  CHECK_THROWS_AS(pq(4.0), UsageError);
  CHECK_THROWS_AS(pq(std::nan("")), DomainError);
  PQPolicy bad;
  bad.panel_width = 0.0;
  CHECK_THROWS_AS(pq(20.0, 0, bad), UsageError);
  const PQValue explicit_k = pq(30.0, 20);
  CHECK(explicit_k.intervals_used == 20);
}

TEST_CASE("ode residual diagnostics") {
  const OdeResidual r = ode_residual(60.0, 1e-4);
  CHECK(std::abs(r.f1 - r.f1_central) < 1e-9 * std::max(1.0, r.envelope));
  CHECK(r.R == doctest::Approx(r.f2 + 6.0 * r.f1 / 60.0 + 4.0 * r.f / 3600.0));
  CHECK(r.envelope > 0.0);
  CHECK(std::isfinite(r.ratio));
  CHECK_THROWS_AS(ode_residual(5.0, 1e-4), UsageError);
  CHECK_THROWS_AS(ode_residual(20.0, 0.0), UsageError);
}
