#include "stochsrc/invert_elastic.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "stochsrc/invert_acoustic.hpp"

namespace stochsrc {

CVec2 combine_normalized(const CVec2& u_p, const CVec2& u_s, double omega, const LameParams& lame) {
  const cplx gamma = farfield_gamma(omega);
  const double cp2 = lame.c_p() * lame.c_p();
  const double cs2 = lame.c_s() * lame.c_s();
  return {(cp2 * u_p[0] + cs2 * u_s[0]) / gamma, (cp2 * u_p[1] + cs2 * u_s[1]) / gamma};
}

CVec2 mean_coefficient_elastic(const CVec2& e_p, const CVec2& e_s, FourierIndex l, double omega_l, double a,
                               const LameParams& lame) {
  if (l.is_zero()) throw std::invalid_argument("the zero mode needs mean_zero_coefficient_elastic");
  const CVec2 u = combine_normalized(e_p, e_s, omega_l, lame);
  return {u[0] / (a * a), u[1] / (a * a)};
}

CVec2 mean_zero_coefficient_elastic(const CVec2& e_p0, const CVec2& e_s0, const CoefficientSet& coeffs, double xi0,
                                    double a, const LameParams& lame) {
  const double s = std::sin(kPi * xi0);
  if (xi0 == std::round(xi0)) throw std::invalid_argument("zero-mode shift must not be an integer");
  if (coeffs.components() != 2) throw std::invalid_argument("elastic coefficients have 2 components");
  const CVec2 u0 = combine_normalized(e_p0, e_s0, 2.0 * kPi / a * xi0, lame);
  CVec2 out{};
  for (int c = 0; c < 2; ++c) {
    cplx leakage = 0.0;
    for (FourierIndex l : lattice_indices(coeffs.truncation()))
      if (!l.is_zero() && l.l2 == 0) leakage += coeffs.at(l, c) * overlap_integral(l, xi0, a);
    out[std::size_t(c)] = xi0 * kPi / s * (u0[std::size_t(c)] - leakage) / (a * a);
  }
  return out;
}

CVec2 variance_coefficient_elastic(const CVec2& covariance, double a) {
  return {covariance[0] / (a * a), covariance[1] / (a * a)};
}

ElasticReconstruction invert_elastic(const MeasurementSet& data) {
  const MeasurementMetadata& m = data.meta;
  if (m.model != Model::elastic) throw std::invalid_argument("elastic inversion given acoustic data");
  m.lame.validate();
  const int n = m.truncation;
  const MeasurementIndex index(data);
  ElasticReconstruction out{CoefficientSet(n, CoefficientKind::mean, m.a, 2),
                            CoefficientSet(n, CoefficientKind::variance, m.a, 2)};

  auto vec = [&](Mode mode, FourierIndex l, Statistic stat) -> std::optional<std::pair<AdmissiblePoint, CVec2>> {
    const Measurement* c1 = index.find(mode, l, stat, 1);
    const Measurement* c2 = index.find(mode, l, stat, 2);
    if (!c1 || !c2) return std::nullopt;
    return std::pair{c1->point, CVec2{c1->value, c2->value}};
  };

  std::string missing;
  for (FourierIndex l : lattice_indices(n)) {
    const bool ok = vec(Mode::elastic_mean, l, Statistic::mean_p) && vec(Mode::elastic_mean, l, Statistic::mean_s) &&
                    vec(Mode::elastic_variance, l, Statistic::covariance);
    if (!ok) missing += " (" + std::to_string(l.l1) + "," + std::to_string(l.l2) + ")";
  }
  if (!missing.empty()) throw std::invalid_argument("measurement set lacks channels for indices" + missing);

  for (FourierIndex l : lattice_indices(n)) {
    if (l.is_zero()) continue;
    const auto ep = vec(Mode::elastic_mean, l, Statistic::mean_p);
    const auto es = vec(Mode::elastic_mean, l, Statistic::mean_s);
    const CVec2 g = mean_coefficient_elastic(ep->second, es->second, l, ep->first.frequency, m.a, m.lame);
    out.mean.at(l, 0) = g[0];
    out.mean.at(l, 1) = g[1];
  }
  const auto ep0 = vec(Mode::elastic_mean, {0, 0}, Statistic::mean_p);
  const auto es0 = vec(Mode::elastic_mean, {0, 0}, Statistic::mean_s);
  const CVec2 g0 = mean_zero_coefficient_elastic(ep0->second, es0->second, out.mean, m.zero_shift, m.a, m.lame);
  out.mean.at({0, 0}, 0) = g0[0];
  out.mean.at({0, 0}, 1) = g0[1];

  for (FourierIndex l : lattice_indices(n)) {
    const auto c = vec(Mode::elastic_variance, l, Statistic::covariance);
    const CVec2 s = variance_coefficient_elastic(c->second, m.a);
    out.variance.at(l, 0) = s[0];
    out.variance.at(l, 1) = s[1];
  }
  return out;
}

}  // namespace stochsrc
