#include "stochsrc/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace stochsrc {

namespace {

namespace fs = std::filesystem;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::runtime_error("malformed number '" + std::string(s) + "'");
  return v;
}

template <class Int>
Int parse_int(std::string_view s) {
  Int v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::runtime_error("malformed integer '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_header(std::ostream& out, const HeaderFields& fields) {
  for (const auto& [k, v] : fields) out << "# " << k << '=' << v << '\n';
}

// Leading "# key=value" lines, one column line, then data rows.
struct CsvFile {
  std::map<std::string, std::string> header;
  std::vector<std::string> columns;
  std::vector<std::string> rows;
};

CsvFile read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  CsvFile f;
  std::string line;
  bool have_columns = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!have_columns && line.front() == '#') {
      const std::string body = line.substr(line.find_first_not_of("# "));
      const auto eq = body.find('=');
      if (eq != std::string::npos) f.header[body.substr(0, eq)] = body.substr(eq + 1);
      continue;
    }
    if (!have_columns) {
      for (auto c : split(line)) f.columns.emplace_back(c);
      have_columns = true;
      continue;
    }
    f.rows.push_back(std::move(line));
  }
  if (!have_columns) throw std::runtime_error(path.string() + ": missing column header");
  return f;
}

void expect_columns(const CsvFile& f, const std::vector<std::string>& want, const fs::path& path) {
  if (f.columns != want) {
    std::string got;
    for (const auto& c : f.columns) got += (got.empty() ? "" : ",") + c;
    throw std::runtime_error(path.string() + ": unexpected columns '" + got + "'");
  }
}

const std::string& need(const std::map<std::string, std::string>& h, const std::string& key) {
  const auto it = h.find(key);
  if (it == h.end()) throw std::runtime_error("metadata header lacks '" + key + "'");
  return it->second;
}

}  // namespace

HeaderFields header_fields(const MeasurementMetadata& m) {
  return {{"config_hash", m.config_hash},
          {"seed", std::to_string(m.seed)},
          {"R", std::to_string(m.realizations)},
          {"M", std::to_string(m.mesh_cells)},
          {"N", std::to_string(m.truncation)},
          {"delta", fmt17(m.delta)},
          {"model", std::string(to_string(m.model))},
          {"a", fmt17(m.a)},
          {"zero_shift", fmt17(m.zero_shift)},
          {"baseline", fmt17(m.baseline)},
          {"zero_dir_x", fmt17(m.zero_dir.x1)},
          {"zero_dir_y", fmt17(m.zero_dir.x2)},
          {"lame_lambda", fmt17(m.lame.lambda)},
          {"lame_mu", fmt17(m.lame.mu)},
          {"source", m.source}};
}

MeasurementMetadata metadata_from_header(const std::map<std::string, std::string>& h) {
  MeasurementMetadata m;
  m.config_hash = need(h, "config_hash");
  m.seed = parse_int<std::uint64_t>(need(h, "seed"));
  m.realizations = parse_int<std::uint64_t>(need(h, "R"));
  m.mesh_cells = parse_int<int>(need(h, "M"));
  m.truncation = parse_int<int>(need(h, "N"));
  m.delta = parse_double(need(h, "delta"));
  m.model = model_from_string(need(h, "model"));
  m.a = parse_double(need(h, "a"));
  m.zero_shift = parse_double(need(h, "zero_shift"));
  m.baseline = parse_double(need(h, "baseline"));
  m.zero_dir = {parse_double(need(h, "zero_dir_x")), parse_double(need(h, "zero_dir_y"))};
  m.lame = {parse_double(need(h, "lame_lambda")), parse_double(need(h, "lame_mu"))};
  m.source = need(h, "source");
  return m;
}

fs::path sidecar_path(const fs::path& csv) {
  fs::path p = csv;
  return p.replace_extension(".json");
}

void write_measurements(const MeasurementSet& set, const fs::path& path) {
  {
    std::ofstream out = open_out(path);
    write_header(out, header_fields(set.meta));
    out << "model,mode,l1,l2,freq,dir_x,dir_y,component,stat,re,im\n";
    const std::string model(to_string(set.meta.model));
    for (const Measurement& r : set.records) {
      out << model << ',' << to_string(r.point.mode) << ',' << r.point.index.l1 << ',' << r.point.index.l2 << ','
          << fmt17(r.point.frequency) << ',' << fmt17(r.point.direction.x1) << ',' << fmt17(r.point.direction.x2)
          << ',' << r.component << ',' << to_string(r.stat) << ',' << fmt17(r.value.real()) << ','
          << fmt17(r.value.imag()) << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
  }
  nlohmann::ordered_json j;
  for (const auto& [k, v] : header_fields(set.meta)) j[k] = v;
  j["records"] = set.records.size();
  j["columns"] = {"model", "mode", "l1", "l2", "freq", "dir_x", "dir_y", "component", "stat", "re", "im"};
  std::ofstream side = open_out(sidecar_path(path));
  side << j.dump(2) << '\n';
}

MeasurementSet read_measurements(const fs::path& path) {
  const CsvFile f = read_csv(path);
  expect_columns(f, {"model", "mode", "l1", "l2", "freq", "dir_x", "dir_y", "component", "stat", "re", "im"}, path);
  MeasurementSet set;
  set.meta = metadata_from_header(f.header);
  set.records.reserve(f.rows.size());
  for (std::size_t i = 0; i < f.rows.size(); ++i) {
    const auto c = split(f.rows[i]);
    if (c.size() != 11)
      throw std::runtime_error(path.string() + ": row " + std::to_string(i + 1) + " has " + std::to_string(c.size()) +
                               " fields");
    if (model_from_string(c[0]) != set.meta.model)
      throw std::runtime_error(path.string() + ": row model disagrees with the header");
    Measurement r;
    r.point.mode = mode_from_string(c[1]);
    r.point.index = {parse_int<int>(c[2]), parse_int<int>(c[3])};
    r.point.frequency = parse_double(c[4]);
    r.point.direction = {parse_double(c[5]), parse_double(c[6])};
    r.component = parse_int<int>(c[7]);
    r.stat = statistic_from_string(c[8]);
    r.value = {parse_double(c[9]), parse_double(c[10])};
    set.records.push_back(r);
  }
  return set;
}

void write_coefficients(const CoefficientSet& coeffs, const MeasurementMetadata& meta, const fs::path& path) {
  std::ofstream out = open_out(path);
  HeaderFields h = header_fields(meta);
  h.emplace_back("kind", std::string(to_string(coeffs.kind())));
  h.emplace_back("components", std::to_string(coeffs.components()));
  h.emplace_back("truncation", std::to_string(coeffs.truncation()));
  h.emplace_back("side", fmt17(coeffs.side()));
  write_header(out, h);
  out << "l1,l2,component,re,im\n";
  const bool vector = coeffs.components() > 1;
  for (FourierIndex l : lattice_indices(coeffs.truncation())) {
    for (int c = 0; c < coeffs.components(); ++c) {
      const cplx v = coeffs.at(l, c);
      out << l.l1 << ',' << l.l2 << ',' << (vector ? c + 1 : 0) << ',' << fmt17(v.real()) << ',' << fmt17(v.imag())
          << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

CoefficientSet read_coefficients(const fs::path& path) {
  const CsvFile f = read_csv(path);
  expect_columns(f, {"l1", "l2", "component", "re", "im"}, path);
  const int comps = parse_int<int>(need(f.header, "components"));
  CoefficientSet coeffs(parse_int<int>(need(f.header, "truncation")),
                        coefficient_kind_from_string(need(f.header, "kind")), parse_double(need(f.header, "side")),
                        comps);
  if (f.rows.size() != coeffs.index_count() * std::size_t(comps))
    throw std::runtime_error(path.string() + ": expected " + std::to_string(coeffs.index_count() * std::size_t(comps)) +
                             " rows, found " + std::to_string(f.rows.size()));
  for (const std::string& row : f.rows) {
    const auto c = split(row);
    if (c.size() != 5) throw std::runtime_error(path.string() + ": malformed row '" + row + "'");
    const int comp = parse_int<int>(c[2]);
    coeffs.at({parse_int<int>(c[0]), parse_int<int>(c[1])}, comps > 1 ? comp - 1 : comp) = {parse_double(c[3]),
                                                                                             parse_double(c[4])};
  }
  return coeffs;
}

GridDump grid_dump_from(const CoefficientSet& coeffs, const MeasurementMetadata& meta, const EvalGrid& grid) {
  GridDump d;
  for (const auto& [k, v] : header_fields(meta)) d.header[k] = v;
  d.header["kind"] = std::string(to_string(coeffs.kind()));
  d.points = grid.points;
  d.components = coeffs.components();
  d.a = grid.a;
  const auto x = grid.axis();
  double imag = 0.0;
  for (int c = 0; c < d.components; ++c) {
    GridSynthesis s = synthesize_on_grid(coeffs, x, x, c);
    d.value.insert(d.value.end(), s.value.begin(), s.value.end());
    d.gradient.insert(d.gradient.end(), s.gradient.begin(), s.gradient.end());
    imag = std::max(imag, s.max_imag_residual);
  }
  d.header["max_imag_residual"] = fmt17(imag);
  return d;
}

void write_grid_dump(const GridDump& d, const fs::path& path) {
  std::ofstream out = open_out(path);
  for (const auto& [k, v] : d.header)
    if (k != "points" && k != "components" && k != "grid_side") out << "# " << k << '=' << v << '\n';
  out << "# points=" << d.points << "\n# components=" << d.components << "\n# grid_side=" << fmt17(d.a) << '\n';
  const bool vector = d.components > 1;
  out << (vector ? "x1,x2,component,value,d1,d2\n" : "x1,x2,value,d1,d2\n");
  const EvalGrid grid{d.a, d.points};
  const auto x = grid.axis();
  std::size_t k = 0;
  for (int c = 0; c < d.components; ++c) {
    for (double x1 : x) {
      for (double x2 : x) {
        out << fmt17(x1) << ',' << fmt17(x2) << ',';
        if (vector) out << c + 1 << ',';
        out << fmt17(d.value[k]) << ',' << fmt17(d.gradient[k].x1) << ',' << fmt17(d.gradient[k].x2) << '\n';
        ++k;
      }
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

GridDump read_grid_dump(const fs::path& path) {
  const CsvFile f = read_csv(path);
  GridDump d;
  d.header = f.header;
  d.points = parse_int<int>(need(f.header, "points"));
  d.components = parse_int<int>(need(f.header, "components"));
  d.a = parse_double(need(f.header, "grid_side"));
  const bool vector = d.components > 1;
  if (vector)
    expect_columns(f, {"x1", "x2", "component", "value", "d1", "d2"}, path);
  else
    expect_columns(f, {"x1", "x2", "value", "d1", "d2"}, path);
  const std::size_t expected = std::size_t(d.points) * std::size_t(d.points) * std::size_t(d.components);
  if (f.rows.size() != expected)
    throw std::runtime_error(path.string() + ": expected " + std::to_string(expected) + " rows, found " +
                             std::to_string(f.rows.size()));
  const std::size_t off = vector ? 1 : 0;
  d.value.reserve(expected);
  d.gradient.reserve(expected);
  for (const std::string& row : f.rows) {
    const auto c = split(row);
    if (c.size() != 5 + off) throw std::runtime_error(path.string() + ": malformed row '" + row + "'");
    d.value.push_back(parse_double(c[2 + off]));
    d.gradient.push_back({parse_double(c[3 + off]), parse_double(c[4 + off])});
  }
  return d;
}

ErrorReport evaluate_dump(const GridDump& dump, CoefficientKind kind, const TestSource& source) {
  const int expected = source.model == Model::acoustic ? 1 : 2;
  if (dump.components != expected)
    throw std::invalid_argument("grid dump has " + std::to_string(dump.components) + " components, source '" +
                                source.name + "' has " + std::to_string(expected));
  const EvalGrid grid{dump.a, dump.points};
  std::vector<double> ex;
  std::vector<Vec2> gex;
  for (int c = 0; c < dump.components; ++c) {
    const GridField e = exact_on_grid(source, kind, c, grid);
    ex.insert(ex.end(), e.value.begin(), e.value.end());
    gex.insert(gex.end(), e.gradient.begin(), e.gradient.end());
  }
  ErrorReport r;
  r.source = source.name;
  r.kind = kind;
  r.rel_l2 = relative_l2(dump.value, ex);
  r.rel_h1 = relative_h1(dump.value, dump.gradient, ex, gex);
  const auto get = [&](const char* k) -> const std::string* {
    const auto it = dump.header.find(k);
    return it == dump.header.end() ? nullptr : &it->second;
  };
  if (auto v = get("max_imag_residual")) r.max_imag_residual = parse_double(*v);
  if (auto v = get("delta")) r.delta = parse_double(*v);
  if (auto v = get("R")) r.realizations = parse_int<std::uint64_t>(*v);
  if (auto v = get("N")) r.truncation = parse_int<int>(*v);
  if (auto v = get("seed")) r.seed = parse_int<std::uint64_t>(*v);
  return r;
}

void write_error_reports(const std::vector<ErrorReport>& rows, const HeaderFields& header, const fs::path& path) {
  std::ofstream out = open_out(path);
  write_header(out, header);
  out << "source,kind,delta,R,N,seed,rel_l2,rel_h1,max_imag_residual\n";
  for (const ErrorReport& r : rows)
    out << r.source << ',' << to_string(r.kind) << ',' << fmt17(r.delta) << ',' << r.realizations << ','
        << r.truncation << ',' << r.seed << ',' << fmt17(r.rel_l2) << ',' << fmt17(r.rel_h1) << ','
        << fmt17(r.max_imag_residual) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace stochsrc
