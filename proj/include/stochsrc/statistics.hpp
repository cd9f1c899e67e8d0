/// @file statistics.hpp
/// @brief Streaming, mergeable mean and Hermitian covariance estimators, the
///        measurement container and the Monte Carlo campaign that fills it.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "stochsrc/config.hpp"
#include "stochsrc/forward_acoustic.hpp"
#include "stochsrc/forward_elastic.hpp"

namespace stochsrc {

template <std::size_t D>
using CVec = std::array<cplx, D>;

/// a * conj(b), written out so that hermitian_product(a, b) is bitwise the
/// conjugate of hermitian_product(b, a).
inline cplx hermitian_product(cplx a, cplx b) {
  return {a.real() * b.real() + a.imag() * b.imag(), a.imag() * b.real() - a.real() * b.imag()};
}

template <std::size_t D>
class MeanAccumulator {
 public:
  void update(const CVec<D>& x) {
    ++count_;
    const double inv = 1.0 / double(count_);
    for (std::size_t c = 0; c < D; ++c) mean_[c] += (x[c] - mean_[c]) * inv;
  }

  std::uint64_t count() const { return count_; }
  /// Throws std::logic_error when no sample has been seen.
  const CVec<D>& mean() const {
    if (count_ == 0) throw std::logic_error("mean of an empty accumulator");
    return mean_;
  }

  friend MeanAccumulator merge(const MeanAccumulator& a, const MeanAccumulator& b) {
    if (a.count_ == 0) return b;
    if (b.count_ == 0) return a;
    MeanAccumulator out;
    out.count_ = a.count_ + b.count_;
    const double wb = double(b.count_) / double(out.count_);
    for (std::size_t c = 0; c < D; ++c) out.mean_[c] = a.mean_[c] + (b.mean_[c] - a.mean_[c]) * wb;
    return out;
  }

 private:
  std::uint64_t count_ = 0;
  CVec<D> mean_{};
};

template <std::size_t D>
struct CovarianceEstimate {
  CVec<D> value{};
  bool single_sample = false;  ///< set when count == 1; value is then 0
};

/// Componentwise C[u, v] = E[(u - Eu) conj(v - Ev)] with population divisor.
template <std::size_t D>
class CovarianceAccumulator {
 public:
  void update(const CVec<D>& u, const CVec<D>& v) {
    ++count_;
    const double n = double(count_);
    for (std::size_t c = 0; c < D; ++c) {
      const cplx du = u[c] - mean_u_[c];
      const cplx dv = v[c] - mean_v_[c];
      comoment_[c] += hermitian_product(du, dv) * ((n - 1.0) / n);
      mean_u_[c] += du / n;
      mean_v_[c] += dv / n;
    }
  }

  std::uint64_t count() const { return count_; }
  const CVec<D>& mean_u() const { return mean_u_; }
  const CVec<D>& mean_v() const { return mean_v_; }
  const CVec<D>& comoment() const { return comoment_; }

  CovarianceEstimate<D> finalize() const {
    if (count_ == 0) throw std::logic_error("covariance of an empty accumulator");
    CovarianceEstimate<D> est;
    est.single_sample = count_ == 1;
    for (std::size_t c = 0; c < D; ++c) est.value[c] = comoment_[c] / double(count_);
    return est;
  }

  friend CovarianceAccumulator merge(const CovarianceAccumulator& a, const CovarianceAccumulator& b) {
    if (a.count_ == 0) return b;
    if (b.count_ == 0) return a;
    CovarianceAccumulator out;
    out.count_ = a.count_ + b.count_;
    const double na = double(a.count_), nb = double(b.count_), n = double(out.count_);
    for (std::size_t c = 0; c < D; ++c) {
      const cplx du = b.mean_u_[c] - a.mean_u_[c];
      const cplx dv = b.mean_v_[c] - a.mean_v_[c];
      out.mean_u_[c] = a.mean_u_[c] + du * (nb / n);
      out.mean_v_[c] = a.mean_v_[c] + dv * (nb / n);
      out.comoment_[c] = a.comoment_[c] + b.comoment_[c] + hermitian_product(du, dv) * (na * nb / n);
    }
    return out;
  }

 private:
  std::uint64_t count_ = 0;
  CVec<D> mean_u_{}, mean_v_{}, comoment_{};
};

template <std::size_t D>
CovarianceAccumulator<D> cov_update(CovarianceAccumulator<D> acc, const CVec<D>& u, const CVec<D>& v) {
  acc.update(u, v);
  return acc;
}

// ---------------------------------------------------------------------------
// Measurement container
// ---------------------------------------------------------------------------

/// E: acoustic mean; Ep / Es: elastic compressional / shear means;
/// C: covariance (raw far fields for acoustic, combined normalized field for
/// elastic).
enum class Statistic : std::uint8_t { mean, mean_p, mean_s, covariance };

std::string_view to_string(Statistic s);
Statistic statistic_from_string(std::string_view s);

struct Measurement {
  AdmissiblePoint point;
  int component = 0;  ///< 0 scalar, 1 | 2 elastic vector component
  Statistic stat = Statistic::mean;
  cplx value;
};

struct MeasurementMetadata {
  Model model = Model::acoustic;
  double a = 1.0;
  double delta = 0.0;
  std::uint64_t realizations = 0;
  int mesh_cells = 0;
  int truncation = 0;
  double zero_shift = kDefaultZeroShift;  ///< lambda0 or xi0
  double baseline = 1.0;                  ///< k0 or omega0
  Vec2 zero_dir{1.0, 0.0};
  LameParams lame;
  std::string source;
  std::uint64_t seed = 0;
  std::string config_hash;
};

/// The four elastic pair covariances C[U_alpha(w0 + tau), U_beta(w0)],
/// (alpha, beta) in {pp, ps, sp, ss}, of one variance channel component.
struct PairCovariance {
  FourierIndex index;
  int component = 1;
  std::array<cplx, 4> pairs{};
};

struct MeasurementSet {
  MeasurementMetadata meta;
  std::vector<Measurement> records;
  /// Batch-means standard error per record (re, im); NaN when fewer than two
  /// full chunks were run. Not serialized.
  std::vector<cplx> std_errors;
  /// Elastic diagnostics; sums to the combined-field covariance. Not serialized.
  std::vector<PairCovariance> pair_covariances;

  /// Linear lookup; nullptr when absent. Use MeasurementIndex for bulk access.
  const Measurement* find(Mode mode, FourierIndex l, Statistic stat, int component) const;
};

/// Keyed view over the records of a MeasurementSet; the set must outlive it.
class MeasurementIndex {
 public:
  explicit MeasurementIndex(const MeasurementSet& set);
  const Measurement* find(Mode mode, FourierIndex l, Statistic stat, int component) const;

 private:
  using Key = std::tuple<Mode, FourierIndex, Statistic, int>;
  std::map<Key, const Measurement*> index_;
};

/// Every point the configuration needs, in the order records are emitted:
/// mean points then variance points, each lexicographic in l.
std::vector<AdmissiblePoint> required_points(const MeasurementMetadata& meta);

using SourceModel = std::variant<ScalarSourceModel, VectorSourceModel>;

/// Runs `config.realizations` realizations and aggregates every mean and
/// covariance channel. Output is a pure function of the config (worker count
/// does not change a single bit).
MeasurementSet run_campaign(const ExperimentConfig& config, const SourceModel& source);

}  // namespace stochsrc
