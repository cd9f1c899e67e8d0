#include "stochsrc/invert_acoustic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "stochsrc/forward_acoustic.hpp"

namespace stochsrc {

cplx mean_coefficient(cplx expectation, FourierIndex l, double k_l, double a) {
  if (l.is_zero()) throw std::invalid_argument("the zero mode needs mean_zero_coefficient");
  return expectation / (a * a * farfield_gamma(k_l));
}

cplx overlap_integral(FourierIndex l, double shift, double a) {
  if (l.l2 != 0) return 0.0;
  const double t = kPi * (double(l.l1) - shift);
  // sin(pi (l1 - s)) = -(-1)^l1 sin(pi s) avoids cancellation for large l1.
  const double sign = (l.l1 % 2 == 0) ? -1.0 : 1.0;
  return a * a * sign * std::sin(kPi * shift) / t;
}

cplx mean_zero_coefficient(cplx e0, const CoefficientSet& coeffs, double lambda0, double a) {
  const double s = std::sin(kPi * lambda0);
  if (lambda0 == std::round(lambda0)) throw std::invalid_argument("zero-mode shift must not be an integer");
  const cplx gamma0 = farfield_gamma(2.0 * kPi / a * lambda0);
  cplx leakage = 0.0;
  for (FourierIndex l : lattice_indices(coeffs.truncation()))
    if (!l.is_zero() && l.l2 == 0) leakage += coeffs.at(l) * overlap_integral(l, lambda0, a);
  return lambda0 * kPi / (a * a * s) * (e0 / gamma0 - leakage);
}

cplx variance_coefficient(cplx raw_covariance, double k0, double tau_l, double a) {
  if (!(k0 > 0.0)) throw std::invalid_argument("baseline wavenumber k0 must be positive");
  return 8.0 * kPi * std::sqrt((k0 + tau_l) * k0) / (a * a) * raw_covariance;
}

namespace {

std::string describe_missing(const std::vector<FourierIndex>& missing, std::string_view what) {
  std::string msg = "measurement set lacks " + std::string(what) + " channels for indices";
  for (FourierIndex l : missing) msg += " (" + std::to_string(l.l1) + "," + std::to_string(l.l2) + ")";
  return msg;
}

}  // namespace

AcousticReconstruction invert_acoustic(const MeasurementSet& data) {
  const MeasurementMetadata& m = data.meta;
  if (m.model != Model::acoustic) throw std::invalid_argument("acoustic inversion given elastic data");
  const int n = m.truncation;
  const MeasurementIndex index(data);
  AcousticReconstruction out{CoefficientSet(n, CoefficientKind::mean, m.a, 1),
                             CoefficientSet(n, CoefficientKind::variance, m.a, 1)};

  std::vector<FourierIndex> missing_mean, missing_var;
  for (FourierIndex l : lattice_indices(n)) {
    if (!index.find(Mode::acoustic_mean, l, Statistic::mean, 0)) missing_mean.push_back(l);
    if (!index.find(Mode::acoustic_variance, l, Statistic::covariance, 0)) missing_var.push_back(l);
  }
  if (!missing_mean.empty()) throw std::invalid_argument(describe_missing(missing_mean, "mean"));
  if (!missing_var.empty()) throw std::invalid_argument(describe_missing(missing_var, "covariance"));

  for (FourierIndex l : lattice_indices(n)) {
    if (l.is_zero()) continue;
    const Measurement* e = index.find(Mode::acoustic_mean, l, Statistic::mean, 0);
    out.mean.at(l) = mean_coefficient(e->value, l, e->point.frequency, m.a);
  }
  const Measurement* e0 = index.find(Mode::acoustic_mean, {0, 0}, Statistic::mean, 0);
  out.mean.at({0, 0}) = mean_zero_coefficient(e0->value, out.mean, m.zero_shift, m.a);

  for (FourierIndex l : lattice_indices(n)) {
    const Measurement* c = index.find(Mode::acoustic_variance, l, Statistic::covariance, 0);
    out.variance.at(l) = variance_coefficient(c->value, m.baseline, c->point.frequency, m.a);
  }
  return out;
}

}  // namespace stochsrc
