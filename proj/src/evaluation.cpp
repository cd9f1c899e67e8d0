#include "stochsrc/evaluation.hpp"

#include <cmath>
#include <stdexcept>

namespace stochsrc {

namespace {

// exp(-200((x1 - 0.01)^2 + (x2 - 0.12)^2))
ScalarField offset_bump() {
  auto f = [](Vec2 x) {
    const double d1 = x.x1 - 0.01, d2 = x.x2 - 0.12;
    return std::exp(-200.0 * (d1 * d1 + d2 * d2));
  };
  return {f, [f](Vec2 x) { return Vec2{-400.0 * (x.x1 - 0.01) * f(x), -400.0 * (x.x2 - 0.12) * f(x)}; }};
}

// exp(-200(...)) - 100 (x2^2 - x1^2) exp(-90 (x1^2 + x2^2))
ScalarField saddle_mean() {
  const ScalarField bump = offset_bump();
  auto f = [bump](Vec2 x) {
    const double q = x.x2 * x.x2 - x.x1 * x.x1;
    return bump(x) - 100.0 * q * std::exp(-90.0 * (x.x1 * x.x1 + x.x2 * x.x2));
  };
  auto grad = [bump](Vec2 x) {
    const double q = x.x2 * x.x2 - x.x1 * x.x1;
    const double e = std::exp(-90.0 * (x.x1 * x.x1 + x.x2 * x.x2));
    const Vec2 gb = bump.gradient(x);
    return Vec2{gb.x1 + 100.0 * e * x.x1 * (2.0 + 180.0 * q), gb.x2 - 100.0 * e * x.x2 * (2.0 - 180.0 * q)};
  };
  return {f, grad};
}

// 1500 x1^2 x2 exp(-50 (x1^2 + x2^2))
ScalarField cubic_mean() {
  auto f = [](Vec2 x) { return 1500.0 * x.x1 * x.x1 * x.x2 * std::exp(-50.0 * (x.x1 * x.x1 + x.x2 * x.x2)); };
  auto grad = [](Vec2 x) {
    const double e = std::exp(-50.0 * (x.x1 * x.x1 + x.x2 * x.x2));
    return Vec2{1500.0 * x.x2 * e * (2.0 * x.x1 - 100.0 * x.x1 * x.x1 * x.x1),
                1500.0 * x.x1 * x.x1 * e * (1.0 - 100.0 * x.x2 * x.x2)};
  };
  return {f, grad};
}

ScalarField scaled(const ScalarField& f, double s) {
  return {[f, s](Vec2 x) { return s * f(x); },
          [f, s](Vec2 x) {
            const Vec2 g = f.gradient(x);
            return Vec2{s * g.x1, s * g.x2};
          }};
}

std::vector<TestSource> build_registry() {
  const ScalarField g1 = saddle_mean();
  std::vector<TestSource> out;
  out.push_back({"acoustic", Model::acoustic, ScalarSourceModel{g1, scaled(g1, 0.5)}});
  out.push_back({"elastic", Model::elastic,
                 VectorSourceModel{{g1, cubic_mean()}, {scaled(g1, 0.5), scaled(offset_bump(), 0.5)}}});
  return out;
}

}  // namespace

const std::vector<TestSource>& registry() {
  static const std::vector<TestSource> sources = build_registry();
  return sources;
}

const TestSource& find_source(std::string_view name) {
  for (const TestSource& s : registry())
    if (s.name == name) return s;
  throw std::invalid_argument("unknown test source '" + std::string(name) + "'");
}

std::vector<double> EvalGrid::axis() const {
  if (points < 2) throw std::invalid_argument("evaluation grid needs at least 2 points per side");
  std::vector<double> x(static_cast<std::size_t>(points));
  const double h = a / (points - 1);
  for (int i = 0; i < points; ++i) x[std::size_t(i)] = -0.5 * a + i * h;
  x.back() = 0.5 * a;
  return x;
}

GridField exact_on_grid(const TestSource& src, CoefficientKind kind, int component, const EvalGrid& grid) {
  const ScalarField* mean = nullptr;
  const ScalarField* sd = nullptr;
  if (const auto* s = std::get_if<ScalarSourceModel>(&src.source)) {
    if (component != 0) throw std::out_of_range("scalar source has a single component");
    mean = &s->mean;
    sd = &s->std_dev;
  } else {
    const auto& v = std::get<VectorSourceModel>(src.source);
    if (component < 0 || component > 1) throw std::out_of_range("vector source has two components");
    mean = &v.mean[std::size_t(component)];
    sd = &v.std_dev[std::size_t(component)];
  }

  const auto x = grid.axis();
  GridField out;
  out.value.reserve(grid.size());
  out.gradient.reserve(grid.size());
  for (double x1 : x) {
    for (double x2 : x) {
      const Vec2 p{x1, x2};
      if (kind == CoefficientKind::mean) {
        out.value.push_back(mean->value(p));
        out.gradient.push_back(mean->gradient(p));
      } else {
        const double s = sd->value(p);
        const Vec2 gs = sd->gradient(p);
        out.value.push_back(s * s);
        out.gradient.push_back({2.0 * s * gs.x1, 2.0 * s * gs.x2});
      }
    }
  }
  return out;
}

double relative_l2(std::span<const double> reconstructed, std::span<const double> exact) {
  if (reconstructed.size() != exact.size()) throw std::invalid_argument("fields live on different grids");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const double d = reconstructed[i] - exact[i];
    num += d * d;
    den += exact[i] * exact[i];
  }
  if (den == 0.0) throw std::invalid_argument("relative error undefined for an identically zero exact field");
  return std::sqrt(num) / std::sqrt(den);
}

double relative_h1(std::span<const double> reconstructed, std::span<const Vec2> grad_reconstructed,
                   std::span<const double> exact, std::span<const Vec2> grad_exact) {
  if (reconstructed.size() != exact.size() || grad_reconstructed.size() != exact.size() ||
      grad_exact.size() != exact.size())
    throw std::invalid_argument("fields live on different grids");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const double d = reconstructed[i] - exact[i];
    const Vec2 dg = grad_reconstructed[i] - grad_exact[i];
    num += dot(dg, dg) + d * d;
    den += dot(grad_exact[i], grad_exact[i]) + exact[i] * exact[i];
  }
  if (den == 0.0) throw std::invalid_argument("relative error undefined for an identically zero exact field");
  return std::sqrt(num) / std::sqrt(den);
}

ErrorReport evaluate_reconstruction(const CoefficientSet& coeffs, const TestSource& src, const EvalGrid& grid) {
  const int comps = coeffs.components();
  if ((src.model == Model::acoustic) != (comps == 1))
    throw std::invalid_argument("coefficient set does not match the source's model");
  const auto x = grid.axis();

  std::vector<double> rec, ex;
  std::vector<Vec2> grec, gex;
  ErrorReport r;
  r.source = src.name;
  r.kind = coeffs.kind();
  r.truncation = coeffs.truncation();
  for (int c = 0; c < comps; ++c) {
    const GridSynthesis syn = synthesize_on_grid(coeffs, x, x, c);
    const GridField exact = exact_on_grid(src, coeffs.kind(), comps == 1 ? 0 : c, grid);
    rec.insert(rec.end(), syn.value.begin(), syn.value.end());
    grec.insert(grec.end(), syn.gradient.begin(), syn.gradient.end());
    ex.insert(ex.end(), exact.value.begin(), exact.value.end());
    gex.insert(gex.end(), exact.gradient.begin(), exact.gradient.end());
    r.max_imag_residual = std::max(r.max_imag_residual, syn.max_imag_residual);
  }
  r.rel_l2 = relative_l2(rec, ex);
  r.rel_h1 = relative_h1(rec, grec, ex, gex);
  return r;
}

}  // namespace stochsrc
