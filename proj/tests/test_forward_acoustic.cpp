#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "stochsrc/evaluation.hpp"
#include "stochsrc/forward_acoustic.hpp"

using namespace stochsrc;

namespace {

double sinc(double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }

ScalarSourceModel gaussian_source() {
  const auto& s = std::get<ScalarSourceModel>(find_source("acoustic").source);
  return {s.mean, constant_field(0.0)};
}

}  // namespace

TEST_CASE("far-field kernel") {
  const cplx g = farfield_kernel({1.0, 0.0}, {0.0, 0.0}, 2.0 * kPi);
  CHECK(std::abs(g - std::polar(1.0 / (4.0 * kPi), kPi / 4.0)) < 1e-15);
  CHECK(std::abs(farfield_kernel({0.0, 1.0}, {0.3, 0.0}, 5.0) - oracle::gamma(5.0)) < 1e-15);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 100; ++i) {
    const double t = 2.0 * kPi * u(rng);
    const double k = 0.1 + 50.0 * (u(rng) + 0.5);
    const cplx v = farfield_kernel({std::cos(t), std::sin(t)}, {u(rng), u(rng)}, k);
    CHECK(std::abs(v) == doctest::Approx(1.0 / std::sqrt(8.0 * kPi * k)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(farfield_gamma(0.0), std::invalid_argument);
  CHECK_THROWS_AS(farfield_kernel({1.0, 0.0}, {0.0, 0.0}, -1.0), std::invalid_argument);
}

TEST_CASE("deterministic far field of simple sources") {
  const QuadratureMesh mesh(64, 1.0);
  const ScalarSourceModel zero{constant_field(0.0), constant_field(0.0)};
  CHECK(deterministic_farfield(zero, 3.0, {1.0, 0.0}, mesh) == cplx(0.0));

  const ScalarSourceModel one{constant_field(1.0), constant_field(0.0)};
  for (double k : {0.5, 2.0 * kPi, 9.0}) {
    const Vec2 xh{0.6, 0.8};
    const cplx exact = oracle::gamma(k) * sinc(k * xh.x1 / 2.0) * sinc(k * xh.x2 / 2.0);
    // Midpoint error for a constant on a square is O((k h)^2 / 24).
    const double h = mesh.spacing();
    CHECK(std::abs(deterministic_farfield(one, k, xh, mesh) - exact) < std::abs(oracle::gamma(k)) * k * k * h * h / 10.0);
  }
}

TEST_CASE("deterministic far field converges under mesh refinement") {
  const ScalarSourceModel src = gaussian_source();
  const cplx coarse = deterministic_farfield(src, 2.0 * kPi, {1.0, 0.0}, QuadratureMesh(64, 1.0));
  const cplx fine = deterministic_farfield(src, 2.0 * kPi, {1.0, 0.0}, QuadratureMesh(512, 1.0));
  CHECK(std::abs(coarse - fine) <= 1e-4 * std::abs(fine));

  const oracle::TensorTransform ref(src.mean.value, 1.0);
  CHECK(std::abs(fine - oracle::gamma(2.0 * kPi) * ref.integral({2.0 * kPi, 0.0})) < 1e-10);
}

TEST_CASE("conjugation symmetry and linearity in g") {
  const QuadratureMesh mesh(48, 1.0);
  const ScalarSourceModel src = gaussian_source();
  const ScalarSourceModel twice{{[&](Vec2 y) { return 2.0 * src.mean(y); }, {}}, constant_field(0.0)};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  for (int i = 0; i < 10; ++i) {
    const double t = u(rng), k = 1.0 + 5.0 * u(rng);
    const Vec2 xh{std::cos(t), std::sin(t)};
    const cplx plus = deterministic_farfield(src, k, xh, mesh) / oracle::gamma(k);
    const cplx minus = deterministic_farfield(src, k, {-xh.x1, -xh.x2}, mesh) / oracle::gamma(k);
    CHECK(std::abs(minus - std::conj(plus)) < 1e-12);
    CHECK(std::abs(deterministic_farfield(twice, k, xh, mesh) - 2.0 * deterministic_farfield(src, k, xh, mesh)) < 1e-12);
  }
}

TEST_CASE("realize_farfield with zero sigma is the deterministic part") {
  const QuadratureMesh mesh(32, 1.0);
  const ScalarSourceModel src = gaussian_source();
  const NoiseGrid noise = sample_noise(mesh, 1, {1, 0});
  CHECK(realize_farfield(src, noise, 7.0, {0.0, 1.0}) == deterministic_farfield(src, 7.0, {0.0, 1.0}, mesh));
}

TEST_CASE("realize_farfield is affine in (g, sigma) for fixed noise") {
  const QuadratureMesh mesh(24, 1.0);
  const NoiseGrid noise = sample_noise(mesh, 1, {4, 2});
  const ScalarField g{[](Vec2 y) { return std::exp(-10.0 * dot(y, y)); }, {}};
  const ScalarField s{[](Vec2 y) { return 1.0 + y.x1; }, {}};
  const ScalarField g2{[&](Vec2 y) { return 3.0 * g(y); }, {}};
  const ScalarField s2{[&](Vec2 y) { return 3.0 * s(y); }, {}};
  const cplx base = realize_farfield({g, s}, noise, 4.0, {1.0, 0.0});
  const cplx scaled = realize_farfield({g2, s2}, noise, 4.0, {1.0, 0.0});
  CHECK(std::abs(scaled - 3.0 * base) < 1e-12);
}

TEST_CASE("Ito isometry through realize_farfield") {
  const QuadratureMesh mesh(16, 1.0);
  const ScalarSourceModel src{constant_field(0.0), constant_field(1.0)};
  const double k = 3.0;
  const int draws = 10000;
  std::vector<double> sq(draws);
  for (int r = 0; r < draws; ++r)
    sq[std::size_t(r)] = std::norm(realize_farfield(src, sample_noise(mesh, 1, {21, std::uint64_t(r)}), k, {1.0, 0.0}));
  double mean = 0.0, var = 0.0;
  for (double v : sq) mean += v / draws;
  for (double v : sq) var += (v - mean) * (v - mean) / (draws - 1);
  const double expected = std::norm(oracle::gamma(k));
  CHECK(std::abs(mean - expected) < 5.0 * std::sqrt(var / draws));
}

TEST_CASE("two-frequency covariance with shared noise") {
  const QuadratureMesh mesh(16, 1.0);
  const ScalarField sigma{[](Vec2 y) { return 0.5 + std::exp(-20.0 * dot(y, y)); }, {}};
  const ScalarSourceModel src{constant_field(0.0), sigma};
  const double k0 = 1.0, tau = 2.0 * kPi;
  const Vec2 xh{1.0, 0.0};
  const int draws = 10000;
  std::vector<cplx> prod(draws);
  for (int r = 0; r < draws; ++r) {
    const NoiseGrid n = sample_noise(mesh, 1, {33, std::uint64_t(r)});
    prod[std::size_t(r)] = realize_farfield(src, n, k0 + tau, xh) * std::conj(realize_farfield(src, n, k0, xh));
  }
  cplx mean = 0.0;
  for (cplx p : prod) mean += p / double(draws);
  double var_re = 0.0, var_im = 0.0;
  for (cplx p : prod) {
    var_re += std::pow(p.real() - mean.real(), 2) / (draws - 1);
    var_im += std::pow(p.imag() - mean.imag(), 2) / (draws - 1);
  }
  // Discrete analytic value: gamma(k0+tau) conj(gamma(k0)) Sum sigma^2 e^{-i tau xh.y} |cell|.
  const oracle::MidpointTransform s2([&](Vec2 y) { return sigma(y) * sigma(y); }, 1.0, 16);
  const cplx exact = oracle::gamma(k0 + tau) * std::conj(oracle::gamma(k0)) * s2.integral({tau, 0.0});
  CHECK(std::abs(mean.real() - exact.real()) < 5.0 * std::sqrt(var_re / draws));
  CHECK(std::abs(mean.imag() - exact.imag()) < 5.0 * std::sqrt(var_im / draws));
}

TEST_CASE("add_noise") {
  const cplx v(0.3, -1.2);
  CHECK(add_noise(v, 0.0, 0.7, -0.2) == v);
  CHECK(std::abs(add_noise(v, 0.1, 1.0, 0.0) - (v + 0.1 * std::abs(v))) < 1e-15);
  CHECK(add_noise(0.0, 0.5, 0.3, 0.9) == cplx(0.0));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const cplx z{5.0 * u(rng), 5.0 * u(rng)};
    const double d = 0.5 * (u(rng) + 1.0);
    CHECK(std::abs(add_noise(z, d, u(rng), u(rng)) - z) <= d * std::abs(z) * (1.0 + 1e-15));
  }
}
