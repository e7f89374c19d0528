#pragma once

#include <string>

#include "hgeo/config.hpp"
#include "hgeo/solvers.hpp"

namespace hgeo {

inline constexpr const char* kReportVersion = "hgeo-report/1";

/// Serializes a report as pretty-printed JSON. Every floating-point number
/// is written with 17 significant digits so that parsing restores it bit for
/// bit. The config supplies the algebra and metric echo.
std::string report_to_json(const SolveReport& report, const ProblemConfig& config);

/// Inverse of report_to_json for the report part. Throws Error(input) on
/// malformed documents or a version mismatch.
SolveReport report_from_json(const std::string& text);

/// Field-by-field equality; NaN compares equal to NaN.
bool reports_equal(const SolveReport& a, const SolveReport& b);

/// Killing-form-only summary used by `hgeo analyze`.
std::string analysis_to_json(const Problem& problem, const ProblemConfig& config);

/// Writes a double with 17 significant digits ("null" for non-finite values).
std::string format_number(double value);

}  // namespace hgeo
