#include "stochsrc/random_field.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace stochsrc {

QuadratureMesh::QuadratureMesh(int cells_per_side, double side) : m_(cells_per_side), a_(side) {
  if (cells_per_side < 2) throw std::invalid_argument("quadrature mesh needs at least 2 cells per side");
  if (!(side > 0.0)) throw std::invalid_argument("quadrature mesh side length must be positive");
}

namespace {

// Stream key: the realization index is part of the seed material, so each
// realization owns an independent generator regardless of scheduling.
std::mt19937_64 realization_engine(SeedSpec seed, std::uint32_t stream) {
  std::seed_seq seq{std::uint32_t(seed.master_seed), std::uint32_t(seed.master_seed >> 32),
                    std::uint32_t(seed.realization), std::uint32_t(seed.realization >> 32), stream};
  return std::mt19937_64(seq);
}

void check_same_mesh(const QuadratureMesh& kernel_mesh, std::size_t kernel_size, const NoiseGrid& noise) {
  if (!(kernel_mesh == noise.mesh) || kernel_size != noise.mesh.cell_count())
    throw std::invalid_argument("kernel and noise are sampled on different meshes");
}

}  // namespace

void sample_noise_into(const QuadratureMesh& mesh, int dims, SeedSpec seed, std::span<double> out) {
  if (dims != 1 && dims != 2) throw std::invalid_argument("noise dimension must be 1 or 2");
  if (out.size() != std::size_t(dims) * mesh.cell_count()) throw std::invalid_argument("noise buffer has wrong size");
  auto engine = realization_engine(seed, 0);
  std::normal_distribution<double> normal(0.0, mesh.spacing());
  for (double& v : out) v = normal(engine);
}

NoiseGrid sample_noise(const QuadratureMesh& mesh, int dims, SeedSpec seed) {
  NoiseGrid grid{mesh, dims, std::vector<double>(std::size_t(dims) * mesh.cell_count())};
  sample_noise_into(mesh, dims, seed, grid.increments);
  return grid;
}

cplx stochastic_integral(const QuadratureMesh& kernel_mesh, std::span<const cplx> kernel, const NoiseGrid& noise) {
  check_same_mesh(kernel_mesh, kernel.size(), noise);
  if (noise.dims != 1) throw std::invalid_argument("scalar kernel needs scalar noise");
  cplx sum = 0.0;
  for (std::size_t j = 0; j < kernel.size(); ++j) sum += kernel[j] * noise.increments[j];
  return sum;
}

CVec2 stochastic_integral(const QuadratureMesh& kernel_mesh, std::span<const CMat2> kernel, const NoiseGrid& noise) {
  check_same_mesh(kernel_mesh, kernel.size(), noise);
  if (noise.dims != 2) throw std::invalid_argument("matrix kernel needs 2-component noise");
  const auto w1 = noise.component(0);
  const auto w2 = noise.component(1);
  CVec2 sum{};
  for (std::size_t j = 0; j < kernel.size(); ++j) {
    const CMat2& k = kernel[j];
    sum[0] += k[0] * w1[j] + k[1] * w2[j];
    sum[1] += k[2] * w1[j] + k[3] * w2[j];
  }
  return sum;
}

}  // namespace stochsrc
