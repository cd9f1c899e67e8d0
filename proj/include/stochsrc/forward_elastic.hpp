/// @file forward_elastic.hpp
/// @brief Compressional and shear far-field patterns of the Navier equation
///        driven by F = g + diag(sigma_1, sigma_2) W'.
#pragma once

#include <array>

#include "stochsrc/domain.hpp"
#include "stochsrc/forward_acoustic.hpp"
#include "stochsrc/random_field.hpp"

namespace stochsrc {

struct LameParams {
  double lambda = 1.0;
  double mu = 1.0;

  /// Throws unless mu > 0 and lambda + mu > 0.
  void validate() const;
  double c_p() const { return std::sqrt(lambda + 2.0 * mu); }
  double c_s() const { return std::sqrt(mu); }
};

enum class Wave { p, s };

struct VectorSourceModel {
  std::array<ScalarField, 2> mean;
  std::array<ScalarField, 2> std_dev;
};

/// Real 2x2 matrix, row-major.
using RMat2 = std::array<double, 4>;

struct Projectors {
  RMat2 p;  ///< xhat xhat^T
  RMat2 s;  ///< I - xhat xhat^T
};

Projectors projections(Vec2 xhat);

inline CVec2 apply(const RMat2& m, const CVec2& v) {
  return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
}

struct ElasticFarFields {
  CVec2 p{};
  CVec2 s{};
};

/// Type-xi far field at angular frequency omega from the Fourier-type volume
/// integral I = Sum_j exp(-i k_xi xhat . y_j) (g_j |cell| + sigma_j Delta W_j)
/// evaluated at k_xi = omega / c_xi:
///   gamma(k_xi) (k_xi / omega)^2 P_xi I.
CVec2 polarized_farfield(const CVec2& integral, Wave wave, double omega, Vec2 xhat, const LameParams& lame);

/// Both far fields of one realization at angular frequency omega.
ElasticFarFields realize_elastic_farfields(const VectorSourceModel& src, const NoiseGrid& noise, double omega,
                                           Vec2 xhat, const LameParams& lame);

/// c_xi * omega_l, the frequency at which the type-xi wavenumber equals the
/// admissible frequency omega_l of `point`.
double elastic_measurement_frequency(const AdmissiblePoint& point, Wave wave, const LameParams& lame);

}  // namespace stochsrc
