/// @file random_field.hpp
/// @brief Midpoint discretization of Omega and the Brownian-sheet increments
///        that stand in for white noise on it.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stochsrc/domain.hpp"

namespace stochsrc {

/// M x M uniform cells over Omega. Cell (j1, j2) has flat index j1 + M * j2.
class QuadratureMesh {
 public:
  QuadratureMesh(int cells_per_side, double side);

  int cells_per_side() const { return m_; }
  double side() const { return a_; }
  std::size_t cell_count() const { return std::size_t(m_) * std::size_t(m_); }
  double spacing() const { return a_ / m_; }
  double cell_area() const { return spacing() * spacing(); }

  /// Midpoint coordinate along one axis.
  double center_1d(int j) const { return -0.5 * a_ + (j + 0.5) * spacing(); }
  Vec2 center(std::size_t flat) const {
    return {center_1d(int(flat % std::size_t(m_))), center_1d(int(flat / std::size_t(m_)))};
  }

  /// Samples f at every cell center, flat order.
  template <class F>
  std::vector<double> sample(F&& f) const {
    std::vector<double> out(cell_count());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = f(center(j));
    return out;
  }

  friend bool operator==(const QuadratureMesh&, const QuadratureMesh&) = default;

 private:
  int m_;
  double a_;
};

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t realization = 0;
};

/// One white-noise realization: per-cell increments Delta W_j ~ N(0, cell_area),
/// stored component-major (component c occupies [c * cells, (c + 1) * cells)).
struct NoiseGrid {
  QuadratureMesh mesh;
  int dims = 1;
  std::vector<double> increments;

  std::span<const double> component(int c) const {
    return std::span<const double>(increments).subspan(std::size_t(c) * mesh.cell_count(), mesh.cell_count());
  }
};

/// Deterministic in (master_seed, realization); independent of which worker
/// calls it or in which order.
NoiseGrid sample_noise(const QuadratureMesh& mesh, int dims, SeedSpec seed);

/// Fills `out` (size dims * cells) with the increments of `sample_noise`
/// without allocating.
void sample_noise_into(const QuadratureMesh& mesh, int dims, SeedSpec seed, std::span<double> out);

/// Sum_j kernel(y_j) Delta W_j for a scalar noise field.
cplx stochastic_integral(const QuadratureMesh& kernel_mesh, std::span<const cplx> kernel, const NoiseGrid& noise);

/// 2x2 complex matrix kernel (row-major {k11, k12, k21, k22}) applied to the
/// 2-vector increments (Delta W_1, Delta W_2).
using CMat2 = std::array<cplx, 4>;
CVec2 stochastic_integral(const QuadratureMesh& kernel_mesh, std::span<const CMat2> kernel, const NoiseGrid& noise);

}  // namespace stochsrc
