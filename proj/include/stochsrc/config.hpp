/// @file config.hpp
/// @brief Experiment configuration shared by the campaign runner and the CLI.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "stochsrc/domain.hpp"
#include "stochsrc/forward_elastic.hpp"

namespace stochsrc {

enum class Model : std::uint8_t { acoustic, elastic };

std::string_view to_string(Model m);
Model model_from_string(std::string_view s);

struct ExperimentConfig {
  Model model = Model::acoustic;
  double a = 1.0;
  double delta = 0.05;
  std::uint64_t realizations = 10000;
  int mesh_cells = 64;
  std::optional<int> truncation;  ///< defaults to truncation_order(delta)
  double lambda0 = kDefaultZeroShift;
  double xi0 = kDefaultZeroShift;
  double k0 = 1.0;
  double omega0 = 1e-3;
  Vec2 zero_dir{1.0, 0.0};
  LameParams lame;
  std::string source = "acoustic";
  std::uint64_t seed = 1;
  int workers = 1;
  std::uint64_t chunk_size = 200;  ///< realizations per reduction chunk; fixes the merge tree
  std::string output = "measurements.csv";

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
  int effective_truncation() const;
  /// lambda0 or xi0, whichever belongs to `model`.
  double zero_shift() const { return model == Model::acoustic ? lambda0 : xi0; }
  /// k0 or omega0, whichever belongs to `model`.
  double baseline() const { return model == Model::acoustic ? k0 : omega0; }

  /// Sorted key=value listing of every field that influences output bytes
  /// (worker count and paths excluded).
  std::string canonical() const;
  /// 16 hex digits of FNV-1a over canonical().
  std::string hash() const;

  /// Applies one `key = value` setting; throws on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
};

/// Parses a TOML-style file of `key = value` lines ('#' comments, optional
/// quotes around strings) on top of `base`.
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// Defaults for the model: source name and baseline frequencies.
ExperimentConfig default_config(Model model);

}  // namespace stochsrc
