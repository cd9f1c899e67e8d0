/// @file pipeline.hpp
/// @brief forward -> invert -> evaluate orchestration and table reproduction.
#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "stochsrc/coefficients.hpp"
#include "stochsrc/config.hpp"
#include "stochsrc/evaluation.hpp"
#include "stochsrc/statistics.hpp"

namespace stochsrc {

/// Campaign for the registry source named in `config.source`.
MeasurementSet run_forward(const ExperimentConfig& config);

struct Reconstruction {
  CoefficientSet mean;
  CoefficientSet variance;
};

/// Dispatches on the data's model.
Reconstruction run_invert(const MeasurementSet& data);

/// Both error reports (mean, variance) of a reconstruction against a source.
std::array<ErrorReport, 2> run_evaluate(const Reconstruction& rec, const MeasurementMetadata& meta,
                                        const TestSource& source, const EvalGrid& grid = {});

enum class Scale : std::uint8_t { desk, paper };
Scale scale_from_string(std::string_view s);
std::string_view to_string(Scale s);
std::uint64_t realizations_for(Scale s);

/// Noise levels of the published tables.
inline constexpr std::array<double, 4> kTableDeltas{0.005, 0.01, 0.05, 0.1};

/// Four metric rows (L2 mean, H1 mean, L2 variance, H1 variance) by one
/// column per noise level. Unfinished columns hold NaN.
struct ReproduceTable {
  int table = 1;
  Scale scale = Scale::desk;
  std::uint64_t realizations = 0;
  std::uint64_t seed = 0;
  int mesh_cells = 0;
  std::vector<double> deltas;
  std::array<std::string, 4> metric_names;
  std::array<std::vector<double>, 4> values;
  std::vector<int> truncations;
  std::vector<std::string> config_hashes;
};

struct ReproduceOptions {
  int table = 1;
  Scale scale = Scale::desk;
  /// Template for every run; model, source, delta and R are overwritten.
  ExperimentConfig base;
  std::vector<double> deltas{kTableDeltas.begin(), kTableDeltas.end()};
  /// 0 picks realizations_for(scale).
  std::uint64_t realizations = 0;
};

/// Runs one full pipeline per noise level. `on_column` fires after each
/// column completes (used to persist partial results).
ReproduceTable run_reproduce(const ReproduceOptions& opts,
                             const std::function<void(const ReproduceTable&)>& on_column = {});

void write_reproduce_table(const ReproduceTable& t, const std::filesystem::path& path);

}  // namespace stochsrc
