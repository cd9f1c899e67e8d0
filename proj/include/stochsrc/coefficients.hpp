/// @file coefficients.hpp
/// @brief Truncated Fourier coefficient sets and their synthesis.
#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "stochsrc/domain.hpp"

namespace stochsrc {

enum class CoefficientKind : std::uint8_t { mean, variance };

std::string_view to_string(CoefficientKind k);
CoefficientKind coefficient_kind_from_string(std::string_view s);

/// Coefficients c_l for every |l|_inf <= N, one complex value per component
/// (1 for acoustic, 2 for elastic).
class CoefficientSet {
 public:
  CoefficientSet(int N, CoefficientKind kind, double a, int components);

  int truncation() const { return n_; }
  CoefficientKind kind() const { return kind_; }
  double side() const { return a_; }
  int components() const { return components_; }
  std::size_t index_count() const { return std::size_t(2 * n_ + 1) * std::size_t(2 * n_ + 1); }

  cplx& at(FourierIndex l, int component = 0);
  const cplx& at(FourierIndex l, int component = 0) const;

  friend bool operator==(const CoefficientSet&, const CoefficientSet&) = default;

 private:
  std::size_t slot(FourierIndex l, int component) const;

  int n_;
  CoefficientKind kind_;
  double a_;
  int components_;
  std::vector<cplx> values_;
};

/// Re( Sum_l c_l phi_l(x) ) for one component.
double synthesize(const CoefficientSet& coeffs, Vec2 x, int component = 0);

/// Im( Sum_l c_l phi_l(x) ), the residual dropped by synthesize.
double synthesis_imag_residual(const CoefficientSet& coeffs, Vec2 x, int component = 0);

/// Exact gradient of the truncated series: Re( Sum_l i (2 pi / a) l c_l phi_l(x) ).
Vec2 synthesize_gradient(const CoefficientSet& coeffs, Vec2 x, int component = 0);

/// Componentwise synthesis for 2-component sets.
std::array<double, 2> synthesize_vector(const CoefficientSet& coeffs, Vec2 x);

/// Values and gradients of one component on a tensor grid, x1-major
/// (index i1 * n2 + i2).
struct GridSynthesis {
  std::vector<double> value;
  std::vector<Vec2> gradient;
  double max_imag_residual = 0.0;
};

GridSynthesis synthesize_on_grid(const CoefficientSet& coeffs, std::span<const double> x1, std::span<const double> x2,
                                 int component = 0);

}  // namespace stochsrc
