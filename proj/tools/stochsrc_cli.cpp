// stochsrc: forward | invert | evaluate | reproduce
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stochsrc/io.hpp"
#include "stochsrc/pipeline.hpp"

namespace fs = std::filesystem;
using namespace stochsrc;

namespace {

struct ConfigFlags {
  std::string config_file;
  std::vector<std::string> sets;
  std::optional<std::string> model;
  std::optional<double> delta;
  std::optional<std::uint64_t> realizations;
  std::optional<int> mesh;
  std::optional<int> truncation;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> source;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_file, "TOML-style key = value file")->check(CLI::ExistingFile);
    app->add_option("--set", sets, "Override any config key (key=value), repeatable");
    app->add_option("--model", model, "acoustic | elastic");
    app->add_option("--delta", delta, "Relative measurement noise level");
    app->add_option("-R,--realizations", realizations, "Monte Carlo realizations");
    app->add_option("-M,--mesh", mesh, "Quadrature cells per side");
    app->add_option("-N,--truncation", truncation, "Fourier truncation order");
    app->add_option("--seed", seed, "Master seed (default: $STOCHSRC_SEED or 1)");
    app->add_option("-j,--workers", workers, "Worker threads");
    app->add_option("--source", source, "Registry source name");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg;
    if (const char* env = std::getenv("STOCHSRC_SEED")) cfg.set("seed", env);
    if (model) cfg = [&] {
      ExperimentConfig d = default_config(model_from_string(*model));
      d.seed = cfg.seed;
      return d;
    }();
    if (!config_file.empty()) cfg = load_config(config_file, cfg);
    if (model) cfg.set("model", *model);
    if (delta) cfg.delta = *delta;
    if (realizations) cfg.realizations = *realizations;
    if (mesh) cfg.mesh_cells = *mesh;
    if (truncation) cfg.truncation = *truncation;
    if (seed) cfg.seed = *seed;
    if (workers) cfg.workers = *workers;
    if (source) cfg.source = *source;
    for (const std::string& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
  }
};

int fail(const std::string& kind, const std::string& message, const nlohmann::json& extra = nlohmann::json::object()) {
  nlohmann::json j{{"error", kind}, {"message", message}};
  for (const auto& [k, v] : extra.items()) j[k] = v;
  std::cerr << j.dump() << '\n';
  return kind == "usage" ? 2 : 1;
}

void print_reports(const std::vector<ErrorReport>& rows) {
  for (const ErrorReport& r : rows)
    std::cout << r.source << ' ' << to_string(r.kind) << ": rel_l2=" << r.rel_l2 << " rel_h1=" << r.rel_h1 << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean and variance reconstruction of random sources from far-field statistics"};
  app.require_subcommand(1);

  ConfigFlags fwd_flags;
  std::string fwd_out;
  auto* fwd = app.add_subcommand("forward", "Run a Monte Carlo measurement campaign");
  fwd_flags.attach(fwd);
  fwd->add_option("-o,--output", fwd_out, "Measurement CSV (default: config output)");

  std::string inv_in, inv_dir = ".";
  int inv_points = 401;
  auto* inv = app.add_subcommand("invert", "Recover Fourier coefficients and grid dumps");
  inv->add_option("input", inv_in, "Measurement CSV")->required()->check(CLI::ExistingFile);
  inv->add_option("-o,--out-dir", inv_dir, "Directory for coefficient and grid files");
  inv->add_option("--grid-points", inv_points, "Grid points per side")->check(CLI::Range(2, 100000));

  std::string ev_grid, ev_source, ev_out;
  auto* ev = app.add_subcommand("evaluate", "Score a grid dump against a registry source");
  ev->add_option("grid", ev_grid, "Grid dump CSV")->required()->check(CLI::ExistingFile);
  ev->add_option("--source", ev_source, "Registry source (default: from the dump header)");
  ev->add_option("-o,--output", ev_out, "Error report CSV");

  ConfigFlags rep_flags;
  int rep_table = 1;
  std::string rep_scale = "desk", rep_out;
  std::vector<double> rep_deltas;
  auto* rep = app.add_subcommand("reproduce", "Rebuild a relative-error table");
  rep_flags.attach(rep);
  rep->add_option("--table", rep_table, "1 (acoustic) | 2 (elastic)")->check(CLI::IsMember({1, 2}));
  rep->add_option("--scale", rep_scale, "desk (R=1e5) | paper (R=1e6)")->check(CLI::IsMember({"desk", "paper"}));
  rep->add_option("--deltas", rep_deltas, "Noise levels (default 0.005 0.01 0.05 0.1)");
  rep->add_option("-o,--output", rep_out, "Table CSV (default table<k>_<scale>.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }

  std::string partial;
  try {
    if (*fwd) {
      ExperimentConfig cfg = fwd_flags.resolve();
      if (!fwd_out.empty()) cfg.output = fwd_out;
      const MeasurementSet set = run_forward(cfg);
      write_measurements(set, cfg.output);
      std::cout << "wrote " << set.records.size() << " records to " << cfg.output << " (config " << set.meta.config_hash
                << ")\n";
    } else if (*inv) {
      const MeasurementSet data = read_measurements(inv_in);
      const Reconstruction rec = run_invert(data);
      const EvalGrid grid{data.meta.a, inv_points};
      const fs::path dir(inv_dir);
      write_coefficients(rec.mean, data.meta, dir / "mean_coefficients.csv");
      write_coefficients(rec.variance, data.meta, dir / "variance_coefficients.csv");
      write_grid_dump(grid_dump_from(rec.mean, data.meta, grid), dir / "mean_grid.csv");
      write_grid_dump(grid_dump_from(rec.variance, data.meta, grid), dir / "variance_grid.csv");
      std::cout << "wrote coefficients and grid dumps to " << dir.string() << '\n';
    } else if (*ev) {
      const GridDump dump = read_grid_dump(ev_grid);
      const auto kind_it = dump.header.find("kind");
      if (kind_it == dump.header.end()) throw std::runtime_error("grid dump header lacks 'kind'");
      if (ev_source.empty()) {
        const auto it = dump.header.find("source");
        if (it == dump.header.end()) throw std::runtime_error("no --source given and the dump names none");
        ev_source = it->second;
      }
      const ErrorReport r = evaluate_dump(dump, coefficient_kind_from_string(kind_it->second), find_source(ev_source));
      HeaderFields h;
      for (const char* k : {"config_hash", "seed", "R", "M", "N", "delta"})
        if (auto it = dump.header.find(k); it != dump.header.end()) h.emplace_back(k, it->second);
      const fs::path out = ev_out.empty() ? fs::path(ev_grid).replace_extension(".errors.csv") : fs::path(ev_out);
      write_error_reports({r}, h, out);
      print_reports({r});
    } else if (*rep) {
      ReproduceOptions opts;
      opts.table = rep_table;
      opts.scale = scale_from_string(rep_scale);
      opts.base = rep_flags.resolve();
      if (!rep_deltas.empty()) opts.deltas = rep_deltas;
      if (rep_flags.realizations) opts.realizations = *rep_flags.realizations;
      partial = rep_out.empty() ? "table" + std::to_string(rep_table) + "_" + rep_scale + ".csv" : rep_out;
      const ReproduceTable t = run_reproduce(opts, [&](const ReproduceTable& cur) {
        write_reproduce_table(cur, partial);
        std::cerr << "column done, partial table in " << partial << '\n';
      });
      write_reproduce_table(t, partial);
      for (std::size_t r = 0; r < 4; ++r) {
        std::cout << t.metric_names[r];
        for (double v : t.values[r]) std::cout << '\t' << v;
        std::cout << '\n';
      }
    }
  } catch (const std::bad_alloc& e) {
    return fail("resource_exhausted", e.what(), partial.empty() ? nlohmann::json::object() : nlohmann::json{{"partial", partial}});
  } catch (const std::invalid_argument& e) {
    return fail("invalid_argument", e.what());
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), partial.empty() ? nlohmann::json::object() : nlohmann::json{{"partial", partial}});
  }
  return 0;
}
