#include "stochsrc/phase_sum.hpp"

#include <map>
#include <stdexcept>

namespace stochsrc {

PhaseSumEvaluator::PhaseSumEvaluator(const QuadratureMesh& mesh, std::span<const Vec2> wavevectors) : mesh_(mesh) {
  const int m = mesh.cells_per_side();
  const auto p = Eigen::Index(wavevectors.size());

  std::map<double, Eigen::Index> rows;
  row_of_point_.reserve(wavevectors.size());
  for (const Vec2& w : wavevectors) {
    auto [it, inserted] = rows.try_emplace(w.x1, Eigen::Index(rows.size()));
    row_of_point_.push_back(it->second);
  }

  e1_re_.resize(Eigen::Index(rows.size()), m);
  e1_im_.resize(Eigen::Index(rows.size()), m);
  for (const auto& [alpha, row] : rows) {
    for (int j = 0; j < m; ++j) {
      const double phase = -alpha * mesh.center_1d(j);
      e1_re_(row, j) = std::cos(phase);
      e1_im_(row, j) = std::sin(phase);
    }
  }

  e2_re_.resize(p, m);
  e2_im_.resize(p, m);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (int j = 0; j < m; ++j) {
      const double phase = -wavevectors[std::size_t(i)].x2 * mesh.center_1d(j);
      e2_re_(i, j) = std::cos(phase);
      e2_im_(i, j) = std::sin(phase);
    }
  }
}

void PhaseSumEvaluator::evaluate(std::span<const double> fields, std::span<cplx> out) const {
  const Eigen::Index m = mesh_.cells_per_side();
  const std::size_t cells = mesh_.cell_count();
  if (fields.size() % cells != 0) throw std::invalid_argument("field buffer is not a whole number of mesh fields");
  const Eigen::Index count = Eigen::Index(fields.size() / cells);
  if (out.size() != std::size_t(count) * size()) throw std::invalid_argument("output buffer has wrong size");
  if (count == 0) return;

  // Column (b * m + j2) of `h` is row j2 of field b.
  const Eigen::Map<const Eigen::MatrixXd> h(fields.data(), m, m * count);
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  // Reused across calls; fresh multi-megabyte temporaries cost more in page faults than the GEMM.
  thread_local RowMat a_re, a_im;
  a_re.resize(e1_re_.rows(), h.cols());
  a_im.resize(e1_im_.rows(), h.cols());
  a_re.noalias() = e1_re_ * h;
  a_im.noalias() = e1_im_ * h;

  const auto points = Eigen::Index(size());
  for (Eigen::Index b = 0; b < count; ++b) {
    for (Eigen::Index i = 0; i < points; ++i) {
      const Eigen::Index row = row_of_point_[std::size_t(i)];
      const double* ar = a_re.data() + row * a_re.cols() + b * m;
      const double* ai = a_im.data() + row * a_im.cols() + b * m;
      const double* er = e2_re_.data() + i * m;
      const double* ei = e2_im_.data() + i * m;
      double re = 0.0, im = 0.0;
      for (Eigen::Index j = 0; j < m; ++j) {
        re += er[j] * ar[j] - ei[j] * ai[j];
        im += er[j] * ai[j] + ei[j] * ar[j];
      }
      out[std::size_t(b * points + i)] = {re, im};
    }
  }
}

}  // namespace stochsrc
