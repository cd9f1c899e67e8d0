/// @file invert_acoustic.hpp
/// @brief Closed-form recovery of the Fourier coefficients of g and sigma^2
///        from acoustic far-field means and two-frequency covariances.
#pragma once

#include "stochsrc/coefficients.hpp"
#include "stochsrc/statistics.hpp"

namespace stochsrc {

/// g_l = E[u(xhat_l; k_l)] / (a^2 gamma(k_l)), l != 0.
cplx mean_coefficient(cplx expectation, FourierIndex l, double k_l, double a);

/// Integral over Omega of phi_l conj(phi_{(shift, 0)}):
/// a^2 sin(pi (l1 - shift)) / (pi (l1 - shift)) when l2 = 0, else 0.
cplx overlap_integral(FourierIndex l, double shift, double a);

/// g_0 from the far-field mean E0 at wavenumber (2 pi / a) lambda0 along (1, 0),
/// corrected by the leakage of the already recovered 1 <= |l|_inf <= N modes.
/// Entries of `coeffs` at l = 0 are ignored.
cplx mean_zero_coefficient(cplx e0, const CoefficientSet& coeffs, double lambda0, double a);

/// sigma_l = 8 pi sqrt((k0 + tau_l) k0) / a^2 * C[u(k0 + tau_l), u(k0)].
cplx variance_coefficient(cplx raw_covariance, double k0, double tau_l, double a);

struct AcousticReconstruction {
  CoefficientSet mean;
  CoefficientSet variance;
};

/// Applies the formulas above to every channel of an acoustic measurement set.
/// Throws std::invalid_argument listing absent indices if channels are missing.
AcousticReconstruction invert_acoustic(const MeasurementSet& data);

}  // namespace stochsrc
