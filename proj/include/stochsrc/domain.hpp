/// @file domain.hpp
/// @brief Square-domain geometry, Fourier lattice indexing and the admissible
///        frequency/direction generators used by both wave models.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <compare>
#include <algorithm>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

namespace stochsrc {

using cplx = std::complex<double>;
using CVec2 = std::array<cplx, 2>;

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x1, s * a.x2}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double norm(Vec2 a) { return std::hypot(a.x1, a.x2); }

/// Side length of Omega = (-a/2, a/2)^2.
struct DomainSpec {
  double a = 1.0;

  explicit DomainSpec(double side = 1.0);
  double half() const { return 0.5 * a; }
  /// 2*pi/a, the lattice spacing of the Fourier basis.
  double lattice() const { return 2.0 * kPi / a; }
};

struct FourierIndex {
  int l1 = 0;
  int l2 = 0;

  bool is_zero() const { return l1 == 0 && l2 == 0; }
  int sup_norm() const { return std::max(std::abs(l1), std::abs(l2)); }
  double length() const { return std::hypot(double(l1), double(l2)); }
  FourierIndex operator-() const { return {-l1, -l2}; }

  friend constexpr auto operator<=>(const FourierIndex&, const FourierIndex&) = default;
};

/// Position of `l` in the lexicographic enumeration of {|l|_inf <= N}.
inline std::size_t lattice_offset(FourierIndex l, int N) {
  return std::size_t(l.l1 + N) * std::size_t(2 * N + 1) + std::size_t(l.l2 + N);
}

/// All indices with |l|_inf <= N in lexicographic (l1, l2) order.
std::vector<FourierIndex> lattice_indices(int N);

enum class Mode : std::uint8_t { acoustic_mean, acoustic_variance, elastic_mean, elastic_variance };

std::string_view to_string(Mode m);
Mode mode_from_string(std::string_view s);
inline bool is_elastic(Mode m) { return m == Mode::elastic_mean || m == Mode::elastic_variance; }

/// One measurement configuration: the Fourier index it resolves, the
/// frequency (k_l, tau_l or omega_l depending on mode) and the observation
/// direction.
struct AdmissiblePoint {
  FourierIndex index;
  double frequency = 0.0;
  Vec2 direction{1.0, 0.0};
  Mode mode = Mode::acoustic_mean;
};

inline constexpr double kDefaultZeroShift = 1e-3;

/// phi_l(x) = exp(i (2 pi / a) l . x)
cplx basis_eval(FourierIndex l, Vec2 x, double a);

/// N = 2 [delta^{-1/2}] where [X] is the largest integer smaller than X + 1.
/// Throws std::invalid_argument for delta <= 0 or delta >= 1.
int truncation_order(double delta);

std::vector<AdmissiblePoint> acoustic_mean_points(int N, double lambda0, double a);
std::vector<AdmissiblePoint> acoustic_variance_points(int N, double a, Vec2 zero_dir = {1.0, 0.0});
std::vector<AdmissiblePoint> elastic_mean_points(int N, double xi0, double a);
std::vector<AdmissiblePoint> elastic_variance_points(int N, double a, Vec2 zero_dir = {1.0, 0.0});

}  // namespace stochsrc
