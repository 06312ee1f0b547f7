#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "peb/evaluate.hpp"
#include "peb/geometry.hpp"
#include "peb/scenario.hpp"

namespace peb {

/// Full-precision decimal rendering (17 significant digits, '.' decimal
/// separator); infinities become the `inf` sentinel.
std::string format_value(double v);

void write_va_csv(std::ostream& out, const ScenarioConfig& config);
void write_map_csv(std::ostream& out, const PebMap& map);
void write_cdf_csv(std::ostream& out, const CdfResult& cdf);
void write_ellipses_csv(std::ostream& out, const EllipseSamples& samples);

/// Grayscale portable graymap of log10(PEB), scaled between the configured
/// log bounds; masked points render black.
void write_raster_pgm(std::ostream& out, const PebMap& map, double log_min, double log_max);

}  // namespace peb
