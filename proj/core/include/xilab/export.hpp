#pragma once

// Deterministic CSV / JSON serialisation of every table the library produces.
// Numbers are written in shortest round-trip form, so identical inputs give
// byte-identical text.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xilab/critical_line.hpp"
#include "xilab/eta_integral.hpp"
#include "xilab/strip_mapper.hpp"

namespace xilab {

enum class Format { csv, json };

/// "csv" or "json"; UsageError otherwise.
Format parse_format(std::string_view text);

/// Shortest representation that parses back to the same double; "nan",
/// "inf", "-inf" for non-finite values.
std::string format_number(double value);

std::string uv_table(std::span<const PointRow> rows, Format format);
std::string zeros_table(std::span<const ZeroRecord> zeros, Format format);
std::string stationary_table(std::span<const StationaryPoint> points, Format format);
std::string pq_table_text(std::span<const PQRow> rows, Format format);
/// CSV: x,y,u,v,sign_u,sign_v per node; JSON: region plus row-major sign matrices.
std::string grid_table(const StripGrid& strip, Format format);
/// CSV polylines curve_id,x,y,u,v.
std::string curves_table(std::span<const Curve> curves, Format format);
std::string anomalies_table(std::span<const Anomaly> anomalies, Format format);

/// Points as "x,y" lines (an optional header line is skipped) or a JSON array
/// of {"x":..,"y":..} objects. Throws UsageError on malformed input.
std::vector<Complex> read_points(std::istream& in);

/// Writes text to path, replacing it; IoError on failure.
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace xilab
