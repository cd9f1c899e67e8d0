#include "stochsrc/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "stochsrc/invert_acoustic.hpp"
#include "stochsrc/invert_elastic.hpp"

namespace stochsrc {

MeasurementSet run_forward(const ExperimentConfig& config) {
  config.validate();
  const TestSource& src = find_source(config.source);
  if (src.model != config.model)
    throw std::invalid_argument("source '" + src.name + "' belongs to the " + std::string(to_string(src.model)) +
                                " model");
  return run_campaign(config, src.source);
}

Reconstruction run_invert(const MeasurementSet& data) {
  if (data.meta.model == Model::acoustic) {
    AcousticReconstruction r = invert_acoustic(data);
    return {std::move(r.mean), std::move(r.variance)};
  }
  ElasticReconstruction r = invert_elastic(data);
  return {std::move(r.mean), std::move(r.variance)};
}

std::array<ErrorReport, 2> run_evaluate(const Reconstruction& rec, const MeasurementMetadata& meta,
                                        const TestSource& source, const EvalGrid& grid) {
  std::array<ErrorReport, 2> out{evaluate_reconstruction(rec.mean, source, grid),
                                 evaluate_reconstruction(rec.variance, source, grid)};
  for (ErrorReport& r : out) {
    r.delta = meta.delta;
    r.realizations = meta.realizations;
    r.seed = meta.seed;
  }
  return out;
}

Scale scale_from_string(std::string_view s) {
  if (s == "desk") return Scale::desk;
  if (s == "paper") return Scale::paper;
  throw std::invalid_argument("unknown scale '" + std::string(s) + "' (expected desk|paper)");
}

std::string_view to_string(Scale s) { return s == Scale::desk ? "desk" : "paper"; }

std::uint64_t realizations_for(Scale s) { return s == Scale::desk ? 100000 : 1000000; }

ReproduceTable run_reproduce(const ReproduceOptions& opts,
                             const std::function<void(const ReproduceTable&)>& on_column) {
  if (opts.table != 1 && opts.table != 2) throw std::invalid_argument("table must be 1 or 2");
  ReproduceTable t;
  t.table = opts.table;
  t.scale = opts.scale;
  t.realizations = opts.realizations ? opts.realizations : realizations_for(opts.scale);
  t.seed = opts.base.seed;
  t.mesh_cells = opts.base.mesh_cells;
  t.deltas = opts.deltas;
  t.metric_names = opts.table == 1 ? std::array<std::string, 4>{"L2(g)", "H1(g)", "L2(sigma^2)", "H1(sigma^2)"}
                                   : std::array<std::string, 4>{"L2(vec g)", "H1(vec g)", "L2(vec sigma^2)",
                                                                "H1(vec sigma^2)"};
  for (auto& row : t.values) row.assign(t.deltas.size(), std::numeric_limits<double>::quiet_NaN());
  t.truncations.assign(t.deltas.size(), 0);
  t.config_hashes.assign(t.deltas.size(), "");

  const Model model = opts.table == 1 ? Model::acoustic : Model::elastic;
  for (std::size_t i = 0; i < t.deltas.size(); ++i) {
    ExperimentConfig cfg = opts.base;
    cfg.model = model;
    cfg.source = std::string(to_string(model));
    cfg.delta = t.deltas[i];
    cfg.truncation.reset();
    cfg.realizations = t.realizations;
    t.truncations[i] = cfg.effective_truncation();
    t.config_hashes[i] = cfg.hash();

    const MeasurementSet data = run_forward(cfg);
    const Reconstruction rec = run_invert(data);
    const auto reports = run_evaluate(rec, data.meta, find_source(cfg.source));
    t.values[0][i] = reports[0].rel_l2;
    t.values[1][i] = reports[0].rel_h1;
    t.values[2][i] = reports[1].rel_l2;
    t.values[3][i] = reports[1].rel_h1;
    if (on_column) on_column(t);
  }
  return t;
}

void write_reproduce_table(const ReproduceTable& t, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  auto join = [&](auto&& f) {
    std::string s;
    for (std::size_t i = 0; i < t.deltas.size(); ++i) s += (i ? ";" : "") + f(i);
    return s;
  };
  char buf[40];
  auto g = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  out << "# table=" << t.table << "\n# scale=" << to_string(t.scale) << "\n# R=" << t.realizations
      << "\n# M=" << t.mesh_cells << "\n# seed=" << t.seed << "\n# config_hash=" << join([&](std::size_t i) { return t.config_hashes[i]; })
      << "\n# N=" << join([&](std::size_t i) { return std::to_string(t.truncations[i]); })
      << "\n# delta=" << join([&](std::size_t i) { return g(t.deltas[i]); }) << '\n';
  out << "metric";
  for (double d : t.deltas) {
    std::snprintf(buf, sizeof buf, "delta=%g%%", 100.0 * d);
    out << ',' << buf;
  }
  out << '\n';
  for (std::size_t r = 0; r < 4; ++r) {
    out << t.metric_names[r];
    for (double v : t.values[r]) out << ',' << (std::isnan(v) ? std::string("nan") : g(v));
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace stochsrc
