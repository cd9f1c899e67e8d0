#include "stochsrc/statistics.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <thread>
#include <tuple>

#include "stochsrc/invert_elastic.hpp"
#include "stochsrc/phase_sum.hpp"

namespace stochsrc {

std::string_view to_string(Statistic s) {
  switch (s) {
    case Statistic::mean: return "E";
    case Statistic::mean_p: return "Ep";
    case Statistic::mean_s: return "Es";
    case Statistic::covariance: return "C";
  }
  return "?";
}

Statistic statistic_from_string(std::string_view s) {
  for (Statistic st : {Statistic::mean, Statistic::mean_p, Statistic::mean_s, Statistic::covariance})
    if (to_string(st) == s) return st;
  throw std::invalid_argument("unknown statistic '" + std::string(s) + "'");
}

const Measurement* MeasurementSet::find(Mode mode, FourierIndex l, Statistic stat, int component) const {
  for (const Measurement& m : records)
    if (m.point.mode == mode && m.point.index == l && m.stat == stat && m.component == component) return &m;
  return nullptr;
}

MeasurementIndex::MeasurementIndex(const MeasurementSet& set) {
  for (const Measurement& m : set.records)
    index_.try_emplace(Key{m.point.mode, m.point.index, m.stat, m.component}, &m);
}

const Measurement* MeasurementIndex::find(Mode mode, FourierIndex l, Statistic stat, int component) const {
  const auto it = index_.find(Key{mode, l, stat, component});
  return it == index_.end() ? nullptr : it->second;
}

std::vector<AdmissiblePoint> required_points(const MeasurementMetadata& meta) {
  std::vector<AdmissiblePoint> pts;
  if (meta.model == Model::acoustic) {
    pts = acoustic_mean_points(meta.truncation, meta.zero_shift, meta.a);
    const auto var = acoustic_variance_points(meta.truncation, meta.a, meta.zero_dir);
    pts.insert(pts.end(), var.begin(), var.end());
  } else {
    pts = elastic_mean_points(meta.truncation, meta.zero_shift, meta.a);
    const auto var = elastic_variance_points(meta.truncation, meta.a, meta.zero_dir);
    pts.insert(pts.end(), var.begin(), var.end());
  }
  return pts;
}

namespace {

constexpr std::uint32_t kPerturbationStream = 1;
constexpr std::size_t kBatch = 8;

/// A distinct (wavenumber, direction) at which a realization is evaluated.
/// Channels that need the same far field share a site, and therefore share
/// its measurement-noise draw.
struct Site {
  double k;
  Vec2 dir;
};

struct Layout {
  std::vector<Site> sites;
  std::vector<AdmissiblePoint> mean_points, var_points;
  std::vector<std::size_t> mean_site, var_hi, var_lo;

  std::map<std::tuple<double, double, double>, std::size_t> lookup;

  std::size_t intern(double k, Vec2 dir) {
    auto [it, inserted] = lookup.try_emplace(std::tuple{k, dir.x1, dir.x2}, sites.size());
    if (inserted) sites.push_back({k, dir});
    return it->second;
  }
};

Layout make_layout(const MeasurementMetadata& meta) {
  Layout lay;
  const bool acoustic = meta.model == Model::acoustic;
  lay.mean_points = acoustic ? acoustic_mean_points(meta.truncation, meta.zero_shift, meta.a)
                             : elastic_mean_points(meta.truncation, meta.zero_shift, meta.a);
  lay.var_points = acoustic ? acoustic_variance_points(meta.truncation, meta.a, meta.zero_dir)
                            : elastic_variance_points(meta.truncation, meta.a, meta.zero_dir);
  for (const auto& p : lay.mean_points) lay.mean_site.push_back(lay.intern(p.frequency, p.direction));
  for (const auto& p : lay.var_points) {
    lay.var_hi.push_back(lay.intern(meta.baseline + p.frequency, p.direction));
    lay.var_lo.push_back(lay.intern(meta.baseline, p.direction));
  }
  return lay;
}

// Accumulators of one chunk of realizations (or of the running total).
struct AcousticState {
  std::vector<MeanAccumulator<1>> mean;
  std::vector<CovarianceAccumulator<1>> cov;

  explicit AcousticState(const Layout& lay) : mean(lay.mean_points.size()), cov(lay.var_points.size()) {}

  void absorb(const AcousticState& o) {
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] = merge(mean[i], o.mean[i]);
    for (std::size_t i = 0; i < cov.size(); ++i) cov[i] = merge(cov[i], o.cov[i]);
  }

  // Record order: mean channels, then covariance channels.
  std::vector<cplx> values() const {
    std::vector<cplx> v;
    v.reserve(mean.size() + cov.size());
    for (const auto& m : mean) v.push_back(m.mean()[0]);
    for (const auto& c : cov) v.push_back(c.finalize().value[0]);
    return v;
  }
};

struct ElasticState {
  std::vector<MeanAccumulator<2>> mean_p, mean_s;
  std::vector<CovarianceAccumulator<2>> cov;
  std::vector<std::array<CovarianceAccumulator<2>, 4>> pairs;

  explicit ElasticState(const Layout& lay)
      : mean_p(lay.mean_points.size()),
        mean_s(lay.mean_points.size()),
        cov(lay.var_points.size()),
        pairs(lay.var_points.size()) {}

  void absorb(const ElasticState& o) {
    for (std::size_t i = 0; i < mean_p.size(); ++i) {
      mean_p[i] = merge(mean_p[i], o.mean_p[i]);
      mean_s[i] = merge(mean_s[i], o.mean_s[i]);
    }
    for (std::size_t i = 0; i < cov.size(); ++i) {
      cov[i] = merge(cov[i], o.cov[i]);
      for (std::size_t q = 0; q < 4; ++q) pairs[i][q] = merge(pairs[i][q], o.pairs[i][q]);
    }
  }

  // Record order per mean point: Ep1, Ep2, Es1, Es2; per variance point: C1, C2.
  std::vector<cplx> values() const {
    std::vector<cplx> v;
    v.reserve(4 * mean_p.size() + 2 * cov.size());
    for (std::size_t i = 0; i < mean_p.size(); ++i) {
      const auto& p = mean_p[i].mean();
      const auto& s = mean_s[i].mean();
      v.insert(v.end(), {p[0], p[1], s[0], s[1]});
    }
    for (const auto& c : cov) {
      const auto e = c.finalize().value;
      v.insert(v.end(), {e[0], e[1]});
    }
    return v;
  }
};

/// Batch-means standard error over full chunks, per record.
class BatchSpread {
 public:
  explicit BatchSpread(std::size_t records) : mean_(records), m2_re_(records), m2_im_(records) {}

  void add(const std::vector<cplx>& estimate) {
    ++n_;
    for (std::size_t i = 0; i < estimate.size(); ++i) {
      const cplx d = estimate[i] - mean_[i];
      mean_[i] += d / double(n_);
      const cplx d2 = estimate[i] - mean_[i];
      m2_re_[i] += d.real() * d2.real();
      m2_im_[i] += d.imag() * d2.imag();
    }
  }

  std::vector<cplx> standard_errors() const {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<cplx> se(mean_.size(), cplx(nan, nan));
    if (n_ < 2) return se;
    const double denom = double(n_) * double(n_ - 1);
    for (std::size_t i = 0; i < se.size(); ++i) se[i] = {std::sqrt(m2_re_[i] / denom), std::sqrt(m2_im_[i] / denom)};
    return se;
  }

 private:
  std::uint64_t n_ = 0;
  std::vector<cplx> mean_;
  std::vector<double> m2_re_, m2_im_;
};

/// Fixed inputs of a campaign, shared read-only by all workers.
struct Engine {
  MeasurementMetadata meta;
  QuadratureMesh mesh;
  Layout layout;
  PhaseSumEvaluator evaluator;
  int dims;
  std::vector<double> sigma;            // dims fields
  std::vector<cplx> deterministic;      // dims x sites, component-major, includes cell area
  std::vector<cplx> gamma;              // per site
};

std::vector<Vec2> wavevectors(const Layout& lay) {
  std::vector<Vec2> w;
  w.reserve(lay.sites.size());
  for (const Site& s : lay.sites) w.push_back(s.k * s.dir);
  return w;
}

Engine make_engine(const MeasurementMetadata& meta, const SourceModel& source) {
  QuadratureMesh mesh(meta.mesh_cells, meta.a);
  Layout lay = make_layout(meta);
  const auto w = wavevectors(lay);
  PhaseSumEvaluator eval(mesh, w);

  const int dims = meta.model == Model::acoustic ? 1 : 2;
  std::vector<double> mean_fields, sigma;
  if (meta.model == Model::acoustic) {
    const auto* src = std::get_if<ScalarSourceModel>(&source);
    if (!src) throw std::invalid_argument("acoustic campaign needs a scalar source");
    mean_fields = mesh.sample(src->mean.value);
    sigma = mesh.sample(src->std_dev.value);
  } else {
    const auto* src = std::get_if<VectorSourceModel>(&source);
    if (!src) throw std::invalid_argument("elastic campaign needs a vector source");
    for (int c = 0; c < 2; ++c) {
      const auto g = mesh.sample(src->mean[std::size_t(c)].value);
      const auto s = mesh.sample(src->std_dev[std::size_t(c)].value);
      mean_fields.insert(mean_fields.end(), g.begin(), g.end());
      sigma.insert(sigma.end(), s.begin(), s.end());
    }
  }

  std::vector<cplx> det(std::size_t(dims) * eval.size());
  eval.evaluate(mean_fields, det);
  for (cplx& d : det) d *= mesh.cell_area();

  std::vector<cplx> gamma;
  gamma.reserve(lay.sites.size());
  for (const Site& s : lay.sites) gamma.push_back(farfield_gamma(s.k));

  return Engine{meta, mesh, std::move(lay), std::move(eval), dims, std::move(sigma), std::move(det), std::move(gamma)};
}

std::mt19937_64 perturbation_rng(std::uint64_t seed, std::uint64_t realization) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(realization),
                    std::uint32_t(realization >> 32), kPerturbationStream};
  return std::mt19937_64(seq);
}

/// Per-worker scratch buffers.
struct Scratch {
  std::vector<double> noise, fields;
  std::vector<cplx> sums;
  std::vector<cplx> u;                      // acoustic far field per site
  std::vector<CVec2> up, us, big_up, big_us;  // elastic, per site
};

/// Evaluates the stochastic sums for realizations [first, first + count).
void stochastic_sums(const Engine& eng, std::uint64_t first, std::size_t count, Scratch& s) {
  const std::size_t cells = eng.mesh.cell_count();
  const std::size_t per = std::size_t(eng.dims) * cells;
  s.noise.resize(per);
  s.fields.resize(count * per);
  for (std::size_t b = 0; b < count; ++b) {
    sample_noise_into(eng.mesh, eng.dims, {eng.meta.seed, first + b}, s.noise);
    double* f = s.fields.data() + b * per;
    for (std::size_t j = 0; j < per; ++j) f[j] = eng.sigma[j] * s.noise[j];
  }
  s.sums.resize(count * std::size_t(eng.dims) * eng.evaluator.size());
  eng.evaluator.evaluate(s.fields, s.sums);
}

void acoustic_chunk(const Engine& eng, std::uint64_t first, std::uint64_t last, AcousticState& st, Scratch& s) {
  const Layout& lay = eng.layout;
  const std::size_t sites = lay.sites.size();
  const double delta = eng.meta.delta;
  s.u.resize(sites);
  for (std::uint64_t r0 = first; r0 < last; r0 += kBatch) {
    const std::size_t count = std::size_t(std::min<std::uint64_t>(kBatch, last - r0));
    stochastic_sums(eng, r0, count, s);
    for (std::size_t b = 0; b < count; ++b) {
      const cplx* sto = s.sums.data() + b * sites;
      for (std::size_t i = 0; i < sites; ++i) s.u[i] = eng.gamma[i] * (eng.deterministic[i] + sto[i]);
      if (delta > 0.0) {
        std::mt19937_64 rng = perturbation_rng(eng.meta.seed, r0 + b);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        for (std::size_t i = 0; i < sites; ++i) {
          const double r1 = uni(rng);
          const double r2 = uni(rng);
          s.u[i] = add_noise(s.u[i], delta, r1, r2);
        }
      }
      for (std::size_t i = 0; i < st.mean.size(); ++i) st.mean[i].update({s.u[lay.mean_site[i]]});
      for (std::size_t i = 0; i < st.cov.size(); ++i) st.cov[i].update({s.u[lay.var_hi[i]]}, {s.u[lay.var_lo[i]]});
    }
  }
}

void elastic_chunk(const Engine& eng, std::uint64_t first, std::uint64_t last, ElasticState& st, Scratch& s) {
  const Layout& lay = eng.layout;
  const LameParams& lame = eng.meta.lame;
  const std::size_t sites = lay.sites.size();
  const double delta = eng.meta.delta;
  const double cp = lame.c_p(), cs = lame.c_s();
  s.up.resize(sites);
  s.us.resize(sites);
  s.big_up.resize(sites);
  s.big_us.resize(sites);
  for (std::uint64_t r0 = first; r0 < last; r0 += kBatch) {
    const std::size_t count = std::size_t(std::min<std::uint64_t>(kBatch, last - r0));
    stochastic_sums(eng, r0, count, s);
    for (std::size_t b = 0; b < count; ++b) {
      const cplx* sto1 = s.sums.data() + (2 * b) * sites;
      const cplx* sto2 = s.sums.data() + (2 * b + 1) * sites;
      for (std::size_t i = 0; i < sites; ++i) {
        const Site& site = lay.sites[i];
        const CVec2 integral{eng.deterministic[i] + sto1[i], eng.deterministic[sites + i] + sto2[i]};
        s.up[i] = polarized_farfield(integral, Wave::p, cp * site.k, site.dir, lame);
        s.us[i] = polarized_farfield(integral, Wave::s, cs * site.k, site.dir, lame);
      }
      if (delta > 0.0) {
        std::mt19937_64 rng = perturbation_rng(eng.meta.seed, r0 + b);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        for (std::size_t i = 0; i < sites; ++i) {
          for (CVec2* field : {&s.up[i], &s.us[i]}) {
            for (cplx& comp : *field) {
              const double r3 = uni(rng);
              const double r4 = uni(rng);
              comp = add_noise(comp, delta, r3, r4);
            }
          }
        }
      }
      for (std::size_t i = 0; i < sites; ++i) {
        const double k = lay.sites[i].k;
        s.big_up[i] = combine_normalized(s.up[i], CVec2{}, k, lame);
        s.big_us[i] = combine_normalized(CVec2{}, s.us[i], k, lame);
      }
      for (std::size_t i = 0; i < st.mean_p.size(); ++i) {
        st.mean_p[i].update(s.up[lay.mean_site[i]]);
        st.mean_s[i].update(s.us[lay.mean_site[i]]);
      }
      for (std::size_t i = 0; i < st.cov.size(); ++i) {
        const std::size_t hi = lay.var_hi[i], lo = lay.var_lo[i];
        const CVec2 u_hi{s.big_up[hi][0] + s.big_us[hi][0], s.big_up[hi][1] + s.big_us[hi][1]};
        const CVec2 u_lo{s.big_up[lo][0] + s.big_us[lo][0], s.big_up[lo][1] + s.big_us[lo][1]};
        st.cov[i].update(u_hi, u_lo);
        st.pairs[i][0].update(s.big_up[hi], s.big_up[lo]);
        st.pairs[i][1].update(s.big_up[hi], s.big_us[lo]);
        st.pairs[i][2].update(s.big_us[hi], s.big_up[lo]);
        st.pairs[i][3].update(s.big_us[hi], s.big_us[lo]);
      }
    }
  }
}

/// Runs all chunks on `workers` threads and folds them into `total` strictly
/// in chunk order, so the reduction tree depends only on the chunk size.
template <class State, class ChunkFn>
State reduce_chunks(const Engine& eng, const ExperimentConfig& cfg, ChunkFn&& run_chunk, BatchSpread& spread) {
  const std::uint64_t total_r = cfg.realizations;
  const std::uint64_t chunk = cfg.chunk_size;
  const std::uint64_t chunks = (total_r + chunk - 1) / chunk;

  State total(eng.layout);
  std::mutex mu;
  std::map<std::uint64_t, State> pending;
  std::uint64_t next_merge = 0;
  std::atomic<std::uint64_t> next_chunk{0};
  std::exception_ptr failure;

  auto worker = [&] {
    Scratch scratch;
    try {
      for (;;) {
        const std::uint64_t c = next_chunk.fetch_add(1);
        if (c >= chunks) return;
        State st(eng.layout);
        const std::uint64_t first = c * chunk;
        const std::uint64_t last = std::min(total_r, first + chunk);
        run_chunk(eng, first, last, st, scratch);

        std::lock_guard lock(mu);
        if (failure) return;
        pending.emplace(c, std::move(st));
        for (auto it = pending.find(next_merge); it != pending.end(); it = pending.find(next_merge)) {
          if (it->first * chunk + chunk <= total_r) spread.add(it->second.values());
          total.absorb(it->second);
          pending.erase(it);
          ++next_merge;
        }
      }
    } catch (...) {
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
      next_chunk.store(chunks);
    }
  };

  const int n_workers = int(std::min<std::uint64_t>(std::uint64_t(cfg.workers), chunks));
  std::vector<std::thread> threads;
  for (int t = 1; t < n_workers; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  return total;
}

MeasurementMetadata metadata_from(const ExperimentConfig& cfg) {
  MeasurementMetadata m;
  m.model = cfg.model;
  m.a = cfg.a;
  m.delta = cfg.delta;
  m.realizations = cfg.realizations;
  m.mesh_cells = cfg.mesh_cells;
  m.truncation = cfg.effective_truncation();
  m.zero_shift = cfg.zero_shift();
  m.baseline = cfg.baseline();
  m.zero_dir = cfg.zero_dir;
  m.lame = cfg.lame;
  m.source = cfg.source;
  m.seed = cfg.seed;
  m.config_hash = cfg.hash();
  return m;
}

}  // namespace

MeasurementSet run_campaign(const ExperimentConfig& config, const SourceModel& source) {
  config.validate();
  MeasurementSet out;
  out.meta = metadata_from(config);
  const Engine eng = make_engine(out.meta, source);
  const Layout& lay = eng.layout;

  if (config.model == Model::acoustic) {
    BatchSpread spread(lay.mean_points.size() + lay.var_points.size());
    const auto st = reduce_chunks<AcousticState>(eng, config, acoustic_chunk, spread);
    const auto values = st.values();
    std::size_t r = 0;
    for (const auto& p : lay.mean_points) out.records.push_back({p, 0, Statistic::mean, values[r++]});
    for (const auto& p : lay.var_points) out.records.push_back({p, 0, Statistic::covariance, values[r++]});
    out.std_errors = spread.standard_errors();
  } else {
    BatchSpread spread(4 * lay.mean_points.size() + 2 * lay.var_points.size());
    const auto st = reduce_chunks<ElasticState>(eng, config, elastic_chunk, spread);
    const auto values = st.values();
    std::size_t r = 0;
    for (const auto& p : lay.mean_points) {
      out.records.push_back({p, 1, Statistic::mean_p, values[r++]});
      out.records.push_back({p, 2, Statistic::mean_p, values[r++]});
      out.records.push_back({p, 1, Statistic::mean_s, values[r++]});
      out.records.push_back({p, 2, Statistic::mean_s, values[r++]});
    }
    for (std::size_t i = 0; i < lay.var_points.size(); ++i) {
      const auto& p = lay.var_points[i];
      out.records.push_back({p, 1, Statistic::covariance, values[r++]});
      out.records.push_back({p, 2, Statistic::covariance, values[r++]});
      for (int c = 0; c < 2; ++c) {
        PairCovariance pc{p.index, c + 1, {}};
        for (std::size_t q = 0; q < 4; ++q) pc.pairs[q] = st.pairs[i][q].finalize().value[std::size_t(c)];
        out.pair_covariances.push_back(pc);
      }
    }
    out.std_errors = spread.standard_errors();
  }
  return out;
}

}  // namespace stochsrc
