/// @file evaluation.hpp
/// @brief Analytic test sources, the 401 x 401 evaluation grid and discrete
///        relative L2 / H1 error norms.
#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "stochsrc/coefficients.hpp"
#include "stochsrc/statistics.hpp"

namespace stochsrc {

struct TestSource {
  std::string name;
  Model model;
  SourceModel source;
};

/// Known sources: "acoustic" (scalar) and "elastic" (vector).
const std::vector<TestSource>& registry();
/// Throws std::invalid_argument for unknown names.
const TestSource& find_source(std::string_view name);

/// Uniform grid over the closed square [-a/2, a/2]^2, `points` per side
/// (spacing a / (points - 1)). Flattened x1-major: index i1 * points + i2.
struct EvalGrid {
  double a = 1.0;
  int points = 401;

  std::vector<double> axis() const;
  std::size_t size() const { return std::size_t(points) * std::size_t(points); }
};

/// Exact field of one component on the grid: g or sigma^2 (kind) with
/// analytic gradient. For sigma^2 the gradient is 2 sigma grad(sigma).
struct GridField {
  std::vector<double> value;
  std::vector<Vec2> gradient;
};

GridField exact_on_grid(const TestSource& src, CoefficientKind kind, int component, const EvalGrid& grid);

/// sqrt(Sum |rec - exact|^2) / sqrt(Sum |exact|^2). Throws when exact is 0.
double relative_l2(std::span<const double> reconstructed, std::span<const double> exact);

/// Discrete H1 analogue including gradient differences.
double relative_h1(std::span<const double> reconstructed, std::span<const Vec2> grad_reconstructed,
                   std::span<const double> exact, std::span<const Vec2> grad_exact);

struct ErrorReport {
  std::string source;
  CoefficientKind kind = CoefficientKind::mean;
  double rel_l2 = 0.0;
  double rel_h1 = 0.0;
  double max_imag_residual = 0.0;
  double delta = 0.0;
  std::uint64_t realizations = 0;
  int truncation = 0;
  std::uint64_t seed = 0;
};

/// Synthesizes every component of `coeffs` on `grid` and scores it against
/// the registry source; vector sources use the stacked (Euclidean) norms.
ErrorReport evaluate_reconstruction(const CoefficientSet& coeffs, const TestSource& src, const EvalGrid& grid);

}  // namespace stochsrc
