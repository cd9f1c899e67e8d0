/// @file forward_acoustic.hpp
/// @brief Far-field pattern of the Helmholtz equation driven by f = g + sigma W'.
#pragma once

#include <functional>

#include "stochsrc/random_field.hpp"

namespace stochsrc {

/// Analytic scalar function on Omega together with its gradient.
struct ScalarField {
  std::function<double(Vec2)> value;
  std::function<Vec2(Vec2)> gradient;

  double operator()(Vec2 x) const { return value(x); }
};

ScalarField constant_field(double c);

/// Mean g and standard deviation sigma >= 0 of the random source.
struct ScalarSourceModel {
  ScalarField mean;
  ScalarField std_dev;
};

/// gamma(k) = e^{i pi/4} / sqrt(8 pi k), the far-field prefactor of the
/// 2D fundamental solution. Throws for k <= 0.
cplx farfield_gamma(double k);

/// G_k^inf(xhat, y) = gamma(k) exp(-i k xhat . y)
cplx farfield_kernel(Vec2 xhat, Vec2 y, double k);

/// Midpoint rule for the integral of G_k^inf(xhat, .) g over Omega.
cplx deterministic_farfield(const ScalarSourceModel& src, double k, Vec2 xhat, const QuadratureMesh& mesh);

/// Far field of one realization. Every (k, xhat) evaluated for the same
/// realization must reuse the same `noise`.
cplx realize_farfield(const ScalarSourceModel& src, const NoiseGrid& noise, double k, Vec2 xhat);

/// value + delta r1 |value| e^{i pi r2}, with r1, r2 in [-1, 1].
cplx add_noise(cplx value, double delta, double r1, double r2);

}  // namespace stochsrc
