#include "stochsrc/domain.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace stochsrc {

DomainSpec::DomainSpec(double side) : a(side) {
  if (!(side > 0.0)) throw std::invalid_argument("domain side length must be positive");
}

std::vector<FourierIndex> lattice_indices(int N) {
  if (N < 0) throw std::invalid_argument("truncation order must be non-negative");
  std::vector<FourierIndex> out;
  out.reserve(std::size_t(2 * N + 1) * std::size_t(2 * N + 1));
  for (int l1 = -N; l1 <= N; ++l1)
    for (int l2 = -N; l2 <= N; ++l2) out.push_back({l1, l2});
  return out;
}

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::acoustic_mean: return "acoustic-mean";
    case Mode::acoustic_variance: return "acoustic-variance";
    case Mode::elastic_mean: return "elastic-mean";
    case Mode::elastic_variance: return "elastic-variance";
  }
  return "?";
}

Mode mode_from_string(std::string_view s) {
  for (Mode m : {Mode::acoustic_mean, Mode::acoustic_variance, Mode::elastic_mean, Mode::elastic_variance})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown measurement mode '" + std::string(s) + "'");
}

cplx basis_eval(FourierIndex l, Vec2 x, double a) {
  const double phase = 2.0 * kPi / a * (l.l1 * x.x1 + l.l2 * x.x2);
  return {std::cos(phase), std::sin(phase)};
}

int truncation_order(double delta) {
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("truncation rule needs 0 < delta < 1; supply N explicitly otherwise");
  const double x = 1.0 / std::sqrt(delta);
  // Largest integer strictly below x + 1: x itself when integral, else ceil(x).
  const double r = std::round(x);
  const int bracket = std::abs(x - r) <= 4.0 * std::numeric_limits<double>::epsilon() * x
                          ? int(r)
                          : int(std::ceil(x));
  return 2 * bracket;
}

namespace {

void check_order(int N) {
  if (N < 1) throw std::invalid_argument("truncation order N must be >= 1");
}

Vec2 unit_direction(FourierIndex l) {
  const double len = l.length();
  return {l.l1 / len, l.l2 / len};
}

// Shared by the two mean-reconstruction generators; only the zero-mode
// shift (lambda0 or xi0) and the mode tag differ.
std::vector<AdmissiblePoint> mean_points(int N, double shift, double a, Mode mode) {
  check_order(N);
  if (!(shift > 0.0 && shift < 1.0)) throw std::invalid_argument("zero-mode shift must lie in (0, 1)");
  const DomainSpec dom(a);
  std::vector<AdmissiblePoint> pts;
  for (FourierIndex l : lattice_indices(N)) {
    if (l.is_zero())
      pts.push_back({l, dom.lattice() * shift, {1.0, 0.0}, mode});
    else
      pts.push_back({l, dom.lattice() * l.length(), unit_direction(l), mode});
  }
  return pts;
}

std::vector<AdmissiblePoint> variance_points(int N, double a, Vec2 zero_dir, Mode mode) {
  check_order(N);
  if (std::abs(norm(zero_dir) - 1.0) > 1e-12) throw std::invalid_argument("zero direction must be a unit vector");
  const DomainSpec dom(a);
  std::vector<AdmissiblePoint> pts;
  for (FourierIndex l : lattice_indices(N)) {
    if (l.is_zero())
      pts.push_back({l, 0.0, zero_dir, mode});
    else
      pts.push_back({l, dom.lattice() * l.length(), unit_direction(l), mode});
  }
  return pts;
}

}  // namespace

std::vector<AdmissiblePoint> acoustic_mean_points(int N, double lambda0, double a) {
  return mean_points(N, lambda0, a, Mode::acoustic_mean);
}

std::vector<AdmissiblePoint> acoustic_variance_points(int N, double a, Vec2 zero_dir) {
  return variance_points(N, a, zero_dir, Mode::acoustic_variance);
}

std::vector<AdmissiblePoint> elastic_mean_points(int N, double xi0, double a) {
  return mean_points(N, xi0, a, Mode::elastic_mean);
}

std::vector<AdmissiblePoint> elastic_variance_points(int N, double a, Vec2 zero_dir) {
  return variance_points(N, a, zero_dir, Mode::elastic_variance);
}

}  // namespace stochsrc
