#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "xilab/eta_integral.hpp"
#include "xilab/export.hpp"
#include "xilab/strip_mapper.hpp"

namespace xilab::cli {

enum ExitCode : int {
  kOk = 0,
  kFailed = 1,  // a check or classification did not hold
  kUsage = 2,
  kConvergence = 3,
  kIo = 4,
  kAnomaly = 5,
};

struct RunConfig {
  double tol = 1e-10;
  double y_max = 100.0;
  double step = 0.5;
  Region region{};
  Format output_format = Format::csv;
  std::string output_path;  // empty: stdout (or the default map directory)
  int threads = 0;          // 0: hardware concurrency

  /// UsageError unless tol in [1e-14, 1e-2], 0 < y_max <= 1000, step > 0,
  /// threads >= 0 and the region is valid.
  void validate() const;
  QuadratureSpec quadrature() const;
};

/// "a+bi", "a-bi", "a", "bi" with optional spaces; UsageError otherwise.
Complex parse_complex(std::string_view text);

/// "x0:x1:y0:y1".
Region parse_region(std::string_view text, int nx, int ny);

struct Check {
  std::string name;
  std::string status;  // pass, fail or advisory
  double measured = 0.0;
  double threshold = 0.0;
  std::string citation;
  std::string detail;
};

struct VerifyReport {
  std::vector<Check> checks;

  bool passed() const;
  std::string text() const;
  std::string json() const;
};

/// Fixed sample sets used by verify and oracle-compare.
std::vector<Complex> route_sample_points();  // 20 points, |x| <= 1, |y| <= 60
std::vector<Complex> cr_sample_points();     // 10 points

/// Lower floor for min |eta| on x in [0.05, 1], y in [0, 100] at 128 x 512,
/// measured once and frozen as a regression value.
inline constexpr double kStripModulusFloor = 5e-16;

VerifyReport run_verify(const RunConfig& config);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace xilab::cli
