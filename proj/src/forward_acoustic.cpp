#include "stochsrc/forward_acoustic.hpp"

#include <stdexcept>
#include <vector>

namespace stochsrc {

ScalarField constant_field(double c) {
  return {[c](Vec2) { return c; }, [](Vec2) { return Vec2{}; }};
}

cplx farfield_gamma(double k) {
  if (!(k > 0.0)) throw std::invalid_argument("far-field wavenumber must be positive");
  return std::polar(1.0 / std::sqrt(8.0 * kPi * k), kPi / 4.0);
}

cplx farfield_kernel(Vec2 xhat, Vec2 y, double k) {
  return farfield_gamma(k) * std::polar(1.0, -k * dot(xhat, y));
}

cplx deterministic_farfield(const ScalarSourceModel& src, double k, Vec2 xhat, const QuadratureMesh& mesh) {
  const cplx gamma = farfield_gamma(k);
  cplx sum = 0.0;
  for (std::size_t j = 0; j < mesh.cell_count(); ++j) {
    const Vec2 y = mesh.center(j);
    sum += src.mean(y) * std::polar(1.0, -k * dot(xhat, y));
  }
  return gamma * sum * mesh.cell_area();
}

cplx realize_farfield(const ScalarSourceModel& src, const NoiseGrid& noise, double k, Vec2 xhat) {
  const QuadratureMesh& mesh = noise.mesh;
  std::vector<cplx> kernel(mesh.cell_count());
  for (std::size_t j = 0; j < kernel.size(); ++j) {
    const Vec2 y = mesh.center(j);
    kernel[j] = farfield_kernel(xhat, y, k) * src.std_dev(y);
  }
  return deterministic_farfield(src, k, xhat, mesh) + stochastic_integral(mesh, kernel, noise);
}

cplx add_noise(cplx value, double delta, double r1, double r2) {
  return value + delta * r1 * std::abs(value) * std::polar(1.0, kPi * r2);
}

}  // namespace stochsrc
