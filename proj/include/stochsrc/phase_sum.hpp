/// @file phase_sum.hpp
/// @brief Batched evaluation of midpoint sums Sum_j exp(-i w . y_j) h_j for a
///        fixed set of wave vectors w and many real mesh fields h.
///
/// The phase factorizes along the two axes, so the sums reduce to one real
/// GEMM against the x1 phase table followed by a short contraction with the
/// x2 phase table. Wave vectors that share an x1 component share a GEMM row;
/// lattice wave vectors (2 pi / a) l collapse to 2N + 1 rows.
#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stochsrc/random_field.hpp"

namespace stochsrc {

class PhaseSumEvaluator {
 public:
  PhaseSumEvaluator(const QuadratureMesh& mesh, std::span<const Vec2> wavevectors);

  const QuadratureMesh& mesh() const { return mesh_; }
  std::size_t size() const { return row_of_point_.size(); }
  std::size_t distinct_rows() const { return std::size_t(e1_re_.rows()); }

  /// `fields` holds `count` consecutive mesh fields (flat cell order each);
  /// `out` receives count x size() sums, field-major.
  void evaluate(std::span<const double> fields, std::span<cplx> out) const;

 private:
  QuadratureMesh mesh_;
  Eigen::MatrixXd e1_re_, e1_im_;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> e2_re_, e2_im_;
  std::vector<Eigen::Index> row_of_point_;
};

}  // namespace stochsrc
