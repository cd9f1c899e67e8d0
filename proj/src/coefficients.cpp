#include "stochsrc/coefficients.hpp"

#include <stdexcept>
#include <string>

namespace stochsrc {

std::string_view to_string(CoefficientKind k) { return k == CoefficientKind::mean ? "mean" : "variance"; }

CoefficientKind coefficient_kind_from_string(std::string_view s) {
  if (s == "mean") return CoefficientKind::mean;
  if (s == "variance") return CoefficientKind::variance;
  throw std::invalid_argument("unknown coefficient kind '" + std::string(s) + "'");
}

CoefficientSet::CoefficientSet(int N, CoefficientKind kind, double a, int components)
    : n_(N), kind_(kind), a_(a), components_(components) {
  if (N < 0) throw std::invalid_argument("truncation order must be non-negative");
  if (components != 1 && components != 2) throw std::invalid_argument("coefficient sets hold 1 or 2 components");
  if (!(a > 0.0)) throw std::invalid_argument("domain side length must be positive");
  values_.assign(index_count() * std::size_t(components), cplx{});
}

std::size_t CoefficientSet::slot(FourierIndex l, int component) const {
  if (l.sup_norm() > n_) throw std::out_of_range("Fourier index outside the truncation");
  if (component < 0 || component >= components_) throw std::out_of_range("coefficient component out of range");
  return lattice_offset(l, n_) * std::size_t(components_) + std::size_t(component);
}

cplx& CoefficientSet::at(FourierIndex l, int component) { return values_[slot(l, component)]; }
const cplx& CoefficientSet::at(FourierIndex l, int component) const { return values_[slot(l, component)]; }

namespace {

cplx series(const CoefficientSet& c, Vec2 x, int component) {
  cplx sum = 0.0;
  for (FourierIndex l : lattice_indices(c.truncation())) sum += c.at(l, component) * basis_eval(l, x, c.side());
  return sum;
}

}  // namespace

double synthesize(const CoefficientSet& coeffs, Vec2 x, int component) { return series(coeffs, x, component).real(); }

double synthesis_imag_residual(const CoefficientSet& coeffs, Vec2 x, int component) {
  return series(coeffs, x, component).imag();
}

Vec2 synthesize_gradient(const CoefficientSet& coeffs, Vec2 x, int component) {
  const double w = 2.0 * kPi / coeffs.side();
  cplx d1 = 0.0, d2 = 0.0;
  for (FourierIndex l : lattice_indices(coeffs.truncation())) {
    const cplx t = cplx(0.0, w) * coeffs.at(l, component) * basis_eval(l, x, coeffs.side());
    d1 += double(l.l1) * t;
    d2 += double(l.l2) * t;
  }
  return {d1.real(), d2.real()};
}

std::array<double, 2> synthesize_vector(const CoefficientSet& coeffs, Vec2 x) {
  if (coeffs.components() != 2) throw std::invalid_argument("vector synthesis needs a 2-component set");
  return {synthesize(coeffs, x, 0), synthesize(coeffs, x, 1)};
}

GridSynthesis synthesize_on_grid(const CoefficientSet& coeffs, std::span<const double> x1, std::span<const double> x2,
                                 int component) {
  const int n = coeffs.truncation();
  const int width = 2 * n + 1;
  const double w = 2.0 * kPi / coeffs.side();
  const std::size_t n1 = x1.size(), n2 = x2.size();

  // Partial sums over l2 for every (l1, x2): t[l1][i2] = Sum_l2 c e^{i w l2 x2}, and
  // the same weighted by i w l2 for the x2-derivative.
  std::vector<cplx> t(std::size_t(width) * n2), t_d2(std::size_t(width) * n2);
  for (int l1 = -n; l1 <= n; ++l1) {
    for (std::size_t i2 = 0; i2 < n2; ++i2) {
      cplx s = 0.0, sd = 0.0;
      for (int l2 = -n; l2 <= n; ++l2) {
        const cplx term = coeffs.at({l1, l2}, component) * std::polar(1.0, w * l2 * x2[i2]);
        s += term;
        sd += cplx(0.0, w * l2) * term;
      }
      t[std::size_t(l1 + n) * n2 + i2] = s;
      t_d2[std::size_t(l1 + n) * n2 + i2] = sd;
    }
  }

  GridSynthesis out;
  out.value.resize(n1 * n2);
  out.gradient.resize(n1 * n2);
  std::vector<cplx> e1(static_cast<std::size_t>(width));
  for (std::size_t i1 = 0; i1 < n1; ++i1) {
    for (int l1 = -n; l1 <= n; ++l1) e1[std::size_t(l1 + n)] = std::polar(1.0, w * l1 * x1[i1]);
    for (std::size_t i2 = 0; i2 < n2; ++i2) {
      cplx v = 0.0, g1 = 0.0, g2 = 0.0;
      for (int l1 = -n; l1 <= n; ++l1) {
        const cplx e = e1[std::size_t(l1 + n)];
        const cplx s = t[std::size_t(l1 + n) * n2 + i2];
        v += e * s;
        g1 += cplx(0.0, w * l1) * e * s;
        g2 += e * t_d2[std::size_t(l1 + n) * n2 + i2];
      }
      out.value[i1 * n2 + i2] = v.real();
      out.gradient[i1 * n2 + i2] = {g1.real(), g2.real()};
      out.max_imag_residual = std::max(out.max_imag_residual, std::abs(v.imag()));
    }
  }
  return out;
}

}  // namespace stochsrc
