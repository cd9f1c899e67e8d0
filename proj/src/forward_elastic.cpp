#include "stochsrc/forward_elastic.hpp"

#include <stdexcept>
#include <vector>

namespace stochsrc {

void LameParams::validate() const {
  if (!(mu > 0.0) || !(lambda + mu > 0.0)) throw std::invalid_argument("Lame parameters need mu > 0 and lambda + mu > 0");
}

Projectors projections(Vec2 xhat) {
  const RMat2 p{xhat.x1 * xhat.x1, xhat.x1 * xhat.x2, xhat.x2 * xhat.x1, xhat.x2 * xhat.x2};
  return {p, {1.0 - p[0], -p[1], -p[2], 1.0 - p[3]}};
}

CVec2 polarized_farfield(const CVec2& integral, Wave wave, double omega, Vec2 xhat, const LameParams& lame) {
  if (!(omega > 0.0)) throw std::invalid_argument("angular frequency must be positive");
  const double c = wave == Wave::p ? lame.c_p() : lame.c_s();
  const double k = omega / c;
  const cplx factor = farfield_gamma(k) * (k * k) / (omega * omega);
  const Projectors proj = projections(xhat);
  CVec2 out = apply(wave == Wave::p ? proj.p : proj.s, integral);
  out[0] *= factor;
  out[1] *= factor;
  return out;
}

namespace {

CVec2 volume_integral(const VectorSourceModel& src, const NoiseGrid& noise, double k, Vec2 xhat) {
  const QuadratureMesh& mesh = noise.mesh;
  const double area = mesh.cell_area();
  std::vector<CMat2> kernel(mesh.cell_count());
  CVec2 det{};
  for (std::size_t j = 0; j < kernel.size(); ++j) {
    const Vec2 y = mesh.center(j);
    const cplx e = std::polar(1.0, -k * dot(xhat, y));
    det[0] += e * src.mean[0](y) * area;
    det[1] += e * src.mean[1](y) * area;
    kernel[j] = {e * src.std_dev[0](y), 0.0, 0.0, e * src.std_dev[1](y)};
  }
  const CVec2 sto = stochastic_integral(mesh, kernel, noise);
  return {det[0] + sto[0], det[1] + sto[1]};
}

}  // namespace

ElasticFarFields realize_elastic_farfields(const VectorSourceModel& src, const NoiseGrid& noise, double omega,
                                           Vec2 xhat, const LameParams& lame) {
  lame.validate();
  if (!(omega > 0.0)) throw std::invalid_argument("angular frequency must be positive");
  if (noise.dims != 2) throw std::invalid_argument("elastic far fields need 2-component noise");
  const CVec2 ip = volume_integral(src, noise, omega / lame.c_p(), xhat);
  const CVec2 is = volume_integral(src, noise, omega / lame.c_s(), xhat);
  return {polarized_farfield(ip, Wave::p, omega, xhat, lame), polarized_farfield(is, Wave::s, omega, xhat, lame)};
}

double elastic_measurement_frequency(const AdmissiblePoint& point, Wave wave, const LameParams& lame) {
  if (!is_elastic(point.mode)) throw std::invalid_argument("measurement frequency requested for a non-elastic point");
  return (wave == Wave::p ? lame.c_p() : lame.c_s()) * point.frequency;
}

}  // namespace stochsrc
