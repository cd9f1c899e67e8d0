#include "stochsrc/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stochsrc {

std::string_view to_string(Model m) { return m == Model::acoustic ? "acoustic" : "elastic"; }

Model model_from_string(std::string_view s) {
  if (s == "acoustic") return Model::acoustic;
  if (s == "elastic") return Model::elastic;
  throw std::invalid_argument("unknown model '" + std::string(s) + "' (expected acoustic or elastic)");
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(a > 0.0, "a must be positive");
  require(delta >= 0.0 && delta < 1.0, "delta must lie in [0, 1)");
  require(realizations >= 1, "realizations must be >= 1");
  require(mesh_cells >= 2, "mesh must have at least 2 cells per side");
  require(!truncation || *truncation >= 1, "N must be >= 1");
  require(truncation || delta > 0.0, "delta = 0 needs an explicit truncation order N");
  require(lambda0 > 0.0 && lambda0 < 1.0, "lambda0 must lie in (0, 1)");
  require(xi0 > 0.0 && xi0 < 1.0, "xi0 must lie in (0, 1)");
  require(k0 > 0.0, "k0 must be positive");
  require(omega0 > 0.0, "omega0 must be positive");
  require(std::abs(norm(zero_dir) - 1.0) <= 1e-12, "zero_dir must be a unit vector");
  require(workers >= 1, "workers must be >= 1");
  require(chunk_size >= 1, "chunk_size must be >= 1");
  lame.validate();
}

int ExperimentConfig::effective_truncation() const {
  return truncation ? *truncation : truncation_order(delta);
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    // Accept integral values written in float notation such as 1e5.
    const double d = parse_double(key, v);
    if (d < 0 || d != std::floor(d)) throw std::invalid_argument("config key '" + key + "': expected a non-negative integer");
    return std::uint64_t(d);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) return s.substr(1, s.size() - 2);
  return s;
}

}  // namespace

std::string ExperimentConfig::canonical() const {
  std::map<std::string, std::string> kv{
      {"a", fmt17(a)},
      {"chunk_size", std::to_string(chunk_size)},
      {"delta", fmt17(delta)},
      {"k0", fmt17(k0)},
      {"lambda0", fmt17(lambda0)},
      {"lame_lambda", fmt17(lame.lambda)},
      {"lame_mu", fmt17(lame.mu)},
      {"mesh", std::to_string(mesh_cells)},
      {"model", std::string(to_string(model))},
      {"N", std::to_string(effective_truncation())},
      {"omega0", fmt17(omega0)},
      {"realizations", std::to_string(realizations)},
      {"seed", std::to_string(seed)},
      {"source", source},
      {"xi0", fmt17(xi0)},
      {"zero_dir_x", fmt17(zero_dir.x1)},
      {"zero_dir_y", fmt17(zero_dir.x2)},
  };
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = unquote(trim(raw));
  if (key == "model") model = model_from_string(v);
  else if (key == "a") a = parse_double(key, v);
  else if (key == "delta") delta = parse_double(key, v);
  else if (key == "realizations" || key == "R") realizations = parse_u64(key, v);
  else if (key == "mesh" || key == "M") mesh_cells = int(parse_u64(key, v));
  else if (key == "N" || key == "truncation") truncation = int(parse_u64(key, v));
  else if (key == "lambda0") lambda0 = parse_double(key, v);
  else if (key == "xi0") xi0 = parse_double(key, v);
  else if (key == "k0") k0 = parse_double(key, v);
  else if (key == "omega0") omega0 = parse_double(key, v);
  else if (key == "zero_dir_x") zero_dir.x1 = parse_double(key, v);
  else if (key == "zero_dir_y") zero_dir.x2 = parse_double(key, v);
  else if (key == "lame_lambda") lame.lambda = parse_double(key, v);
  else if (key == "lame_mu") lame.mu = parse_double(key, v);
  else if (key == "source") source = v;
  else if (key == "seed") seed = parse_u64(key, v);
  else if (key == "workers") workers = int(parse_u64(key, v));
  else if (key == "chunk_size") chunk_size = parse_u64(key, v);
  else if (key == "output") output = v;
  else throw std::invalid_argument("unknown config key '" + key + "'");
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

ExperimentConfig default_config(Model model) {
  ExperimentConfig c;
  c.model = model;
  c.source = std::string(to_string(model));
  return c;
}

}  // namespace stochsrc
