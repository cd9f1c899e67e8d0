/// @file io.hpp
/// @brief CSV / JSON file formats. Every file opens with `# key=value`
///        metadata lines (config hash, seed, R, M, N, delta, ...).
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "stochsrc/coefficients.hpp"
#include "stochsrc/evaluation.hpp"
#include "stochsrc/statistics.hpp"

namespace stochsrc {

/// Ordered `key=value` pairs written as the leading `#` lines of a file.
using HeaderFields = std::vector<std::pair<std::string, std::string>>;

HeaderFields header_fields(const MeasurementMetadata& meta);
/// Inverse of header_fields; throws std::runtime_error on missing keys.
MeasurementMetadata metadata_from_header(const std::map<std::string, std::string>& header);

/// Writes `path` (CSV) and the JSON sidecar `path` with extension `.json`.
void write_measurements(const MeasurementSet& set, const std::filesystem::path& path);
/// Reads the CSV; metadata comes from its header lines.
MeasurementSet read_measurements(const std::filesystem::path& path);
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

void write_coefficients(const CoefficientSet& coeffs, const MeasurementMetadata& meta,
                        const std::filesystem::path& path);
CoefficientSet read_coefficients(const std::filesystem::path& path);

/// Values of a reconstruction (or any field) on an EvalGrid with gradients.
struct GridDump {
  std::map<std::string, std::string> header;
  int points = 0;
  int components = 1;
  double a = 1.0;
  /// Component-major, each block x1-major.
  std::vector<double> value;
  std::vector<Vec2> gradient;
};

/// Rows: x1, x2, [component,] value, d1, d2; component-major then x1-major.
void write_grid_dump(const GridDump& dump, const std::filesystem::path& path);
GridDump read_grid_dump(const std::filesystem::path& path);
/// Synthesizes every component of `coeffs` on `grid`.
GridDump grid_dump_from(const CoefficientSet& coeffs, const MeasurementMetadata& meta, const EvalGrid& grid);

/// Scores a dump against the registry source named `source`.
ErrorReport evaluate_dump(const GridDump& dump, CoefficientKind kind, const TestSource& source);

void write_error_reports(const std::vector<ErrorReport>& rows, const HeaderFields& header,
                         const std::filesystem::path& path);

}  // namespace stochsrc
