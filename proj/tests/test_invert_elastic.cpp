#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "stochsrc/evaluation.hpp"
#include "stochsrc/invert_elastic.hpp"

using namespace stochsrc;

namespace {

using Fn = std::function<double(Vec2)>;

// Noise-free elastic data: p and s far fields built from midpoint integrals of
// g, and combined-field covariances from midpoint integrals of sigma_c^2.
MeasurementSet oracle_dataset(const std::array<Fn, 2>& g, const std::array<Fn, 2>& s2, int N, int m,
                              const LameParams& lame, double a = 1.0) {
  MeasurementSet set;
  set.meta.model = Model::elastic;
  set.meta.a = a;
  set.meta.truncation = N;
  set.meta.zero_shift = 1e-3;
  set.meta.baseline = 1.0;
  set.meta.lame = lame;
  const std::array<oracle::MidpointTransform, 2> mg{oracle::MidpointTransform(g[0], a, m),
                                                    oracle::MidpointTransform(g[1], a, m)};
  const std::array<oracle::MidpointTransform, 2> ms{oracle::MidpointTransform(s2[0], a, m),
                                                    oracle::MidpointTransform(s2[1], a, m)};
  for (const auto& p : elastic_mean_points(N, 1e-3, a)) {
    const Vec2 w{p.frequency * p.direction.x1, p.frequency * p.direction.x2};
    const CVec2 integral{mg[0].integral(w), mg[1].integral(w)};
    const CVec2 up = polarized_farfield(integral, Wave::p, lame.c_p() * p.frequency, p.direction, lame);
    const CVec2 us = polarized_farfield(integral, Wave::s, lame.c_s() * p.frequency, p.direction, lame);
    for (int c = 0; c < 2; ++c) {
      set.records.push_back({p, c + 1, Statistic::mean_p, up[std::size_t(c)]});
      set.records.push_back({p, c + 1, Statistic::mean_s, us[std::size_t(c)]});
    }
  }
  for (const auto& p : elastic_variance_points(N, a)) {
    const Vec2 w{p.frequency * p.direction.x1, p.frequency * p.direction.x2};
    for (int c = 0; c < 2; ++c) set.records.push_back({p, c + 1, Statistic::covariance, ms[std::size_t(c)].integral(w)});
  }
  return set;
}

Fn constant(double c) {
  return [c](Vec2) { return c; };
}

}  // namespace

TEST_CASE("combine_normalized recovers the unprojected integral") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  for (const LameParams lame : {LameParams{1.0, 1.0}, LameParams{3.0, 0.4}}) {
    for (int i = 0; i < 50; ++i) {
      const CVec2 integral{cplx(n(rng), n(rng)), cplx(n(rng), n(rng))};
      const double omega = 0.5 + u(rng), t = u(rng);
      const Vec2 xh{std::cos(t), std::sin(t)};
      const CVec2 up = polarized_farfield(integral, Wave::p, lame.c_p() * omega, xh, lame);
      const CVec2 us = polarized_farfield(integral, Wave::s, lame.c_s() * omega, xh, lame);
      const CVec2 combined = combine_normalized(up, us, omega, lame);
      CHECK(std::abs(combined[0] - integral[0]) < 1e-13);
      CHECK(std::abs(combined[1] - integral[1]) < 1e-13);
    }
  }
}

TEST_CASE("elastic mean coefficient") {
  const LameParams lame{1.0, 1.0};
  CHECK_THROWS_AS(mean_coefficient_elastic({}, {}, {0, 0}, 1.0, 1.0, lame), std::invalid_argument);
  const CVec2 zero = mean_coefficient_elastic({}, {}, {1, 0}, 2.0 * kPi, 1.0, lame);
  CHECK(zero[0] == cplx(0.0));
  CHECK(zero[1] == cplx(0.0));
  const CVec2 v = variance_coefficient_elastic({cplx(4.0, 2.0), cplx(-1.0)}, 2.0);
  CHECK(v[0] == cplx(1.0, 0.5));
  CHECK(v[1] == cplx(-0.25));
  CoefficientSet scalar(2, CoefficientKind::mean, 1.0, 1);
  CHECK_THROWS_AS(mean_zero_coefficient_elastic({}, {}, scalar, 1e-3, 1.0, lame), std::invalid_argument);
}

TEST_CASE("constant vector source") {
  const LameParams lame{1.0, 1.0};
  const auto set = oracle_dataset({constant(0.7), constant(-1.3)}, {constant(0.25), constant(0.0)}, 4, 512, lame);
  const auto rec = invert_elastic(set);
  CHECK(std::abs(rec.mean.at({0, 0}, 0) - 0.7) < 1e-6);
  CHECK(std::abs(rec.mean.at({0, 0}, 1) + 1.3) < 1e-6);
  // Midpoint sums of a constant vanish at nonzero lattice frequencies.
  for (FourierIndex l : lattice_indices(4)) {
    if (l.is_zero()) continue;
    CHECK(std::abs(rec.mean.at(l, 0)) < 1e-12);
    CHECK(std::abs(rec.mean.at(l, 1)) < 1e-12);
    CHECK(std::abs(rec.variance.at(l, 0)) < 1e-12);
  }
  CHECK(std::abs(rec.variance.at({0, 0}, 0) - 0.25) < 1e-12);
  CHECK(std::abs(rec.variance.at({0, 0}, 1)) == 0.0);
}

TEST_CASE("registry source round trip against Gauss-Legendre coefficients") {
  const auto& src = std::get<VectorSourceModel>(find_source("elastic").source);
  const int N = 8;
  std::array<Fn, 2> g, s2;
  for (std::size_t c = 0; c < 2; ++c) {
    g[c] = src.mean[c].value;
    s2[c] = [f = src.std_dev[c]](Vec2 y) { return f(y) * f(y); };
  }
  for (const LameParams lame : {LameParams{1.0, 1.0}, LameParams{2.0, 0.5}}) {
    const auto rec = invert_elastic(oracle_dataset(g, s2, N, 512, lame));
    for (int c = 0; c < 2; ++c) {
      const auto gref = oracle::TensorTransform(g[std::size_t(c)], 1.0).coefficients(N);
      const auto sref = oracle::TensorTransform(s2[std::size_t(c)], 1.0).coefficients(N);
      double worst_mean = 0.0, worst_var = 0.0;
      for (FourierIndex l : lattice_indices(N)) {
        const std::size_t o = lattice_offset(l, N);
        if (!l.is_zero()) worst_mean = std::max(worst_mean, std::abs(rec.mean.at(l, c) - gref[o]));
        worst_var = std::max(worst_var, std::abs(rec.variance.at(l, c) - sref[o]));
      }
      CHECK(worst_mean < 1e-8);
      CHECK(worst_var < 1e-8);
      CHECK(std::abs(rec.mean.at({0, 0}, c) - gref[lattice_offset({0, 0}, N)]) < 1e-6);
    }
  }
}

TEST_CASE("elastic inversion rejects incomplete or acoustic data") {
  const LameParams lame{1.0, 1.0};
  auto set = oracle_dataset({constant(1.0), constant(1.0)}, {constant(1.0), constant(1.0)}, 2, 8, lame);
  std::erase_if(set.records, [](const Measurement& m) {
    return m.stat == Statistic::mean_s && m.component == 2 && m.point.index == FourierIndex{2, 1};
  });
  try {
    invert_elastic(set);
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("(2,1)") != std::string::npos);
  }
  set.meta.model = Model::acoustic;
  CHECK_THROWS_AS(invert_elastic(set), std::invalid_argument);
}

TEST_CASE("vector synthesis") {
  CoefficientSet c(1, CoefficientKind::mean, 1.0, 2);
  c.at({0, 0}, 0) = 2.0;
  c.at({1, 0}, 1) = 0.5;
  c.at({-1, 0}, 1) = 0.5;
  const auto v = synthesize_vector(c, {0.25, 0.1});
  CHECK(v[0] == doctest::Approx(2.0));
  CHECK(std::abs(v[1]) < 1e-15);
  const auto w = synthesize_vector(c, {0.0, 0.3});
  CHECK(w[1] == doctest::Approx(1.0));
  CHECK(synthesize(c, {0.0, 0.3}, 1) == doctest::Approx(1.0));
}
