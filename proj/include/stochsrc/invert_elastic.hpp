/// @file invert_elastic.hpp
/// @brief Recovery of the vector Fourier coefficients of g and sigma^2 from
///        compressional/shear far-field statistics.
#pragma once

#include "stochsrc/coefficients.hpp"
#include "stochsrc/forward_elastic.hpp"
#include "stochsrc/statistics.hpp"

namespace stochsrc {

/// U = c_p^2 / gamma(omega) u_p + c_s^2 / gamma(omega) u_s, where u_xi was
/// measured at frequency c_xi omega (so both wavenumbers equal omega).
CVec2 combine_normalized(const CVec2& u_p, const CVec2& u_s, double omega, const LameParams& lame);

/// g_l = (1/a^2)(c_p^2/gamma_l E_p + c_s^2/gamma_l E_s), l != 0.
CVec2 mean_coefficient_elastic(const CVec2& e_p, const CVec2& e_s, FourierIndex l, double omega_l, double a,
                               const LameParams& lame);

/// g_0 = (xi0 pi / sin xi0 pi) [ (1/a^2) U_0 - (1/a^2) Sum_{l != 0} g_l overlap(l, xi0) ]
/// with U_0 the combined normalized mean at omega_0 = (2 pi / a) xi0 along (1, 0).
CVec2 mean_zero_coefficient_elastic(const CVec2& e_p0, const CVec2& e_s0, const CoefficientSet& coeffs, double xi0,
                                    double a, const LameParams& lame);

/// sigma_l = C[U(xhat_l; omega0 + tau_l), U(xhat_l; omega0)] / a^2, componentwise.
CVec2 variance_coefficient_elastic(const CVec2& covariance, double a);

struct ElasticReconstruction {
  CoefficientSet mean;
  CoefficientSet variance;
};

ElasticReconstruction invert_elastic(const MeasurementSet& data);

}  // namespace stochsrc
