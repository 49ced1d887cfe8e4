#include "rim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "rim/errors.hpp"

namespace rim {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"run", {"seed"}},
      {"metric", {"kind", "dim", "diagonal", "entries", "amplitude", "wavevector", "tolerance"}},
      {"particle", {"charge", "mass"}},
      {"potential", {"kind", "value", "field", "plane"}},
      {"simulate", {"gauge", "x0", "v0", "tau_end", "step", "stride"}},
      {"extremize", {"start", "end", "interior", "perturbation", "max_iters", "grad_tol"}},
      {"brane", {"embedding", "file", "brane_dim", "points", "slope", "amplitude", "radius",
                 "angle", "height", "width", "tension", "charge"}},
      {"clifford", {"algebra", "form", "perturbation", "trials", "samples"}},
      {"check", {"samples"}},
  };
  return keys;
}

bool is_tensor_section(const std::string& name, int* rank) {
  if (name.rfind("tensor.", 0) != 0) return false;
  const std::string tail = name.substr(7);
  int r = 0;
  auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), r);
  if (ec != std::errc() || ptr != tail.data() + tail.size()) return false;
  *rank = r;
  return true;
}

// "S(0, 1, 2)" -> {0, 1, 2}; empty optional when the key is not a tensor entry.
std::optional<std::vector<int>> tensor_key(const std::string& key) {
  if (key.size() < 3 || key[0] != 'S' || key[1] != '(' || key.back() != ')') return std::nullopt;
  std::vector<int> out;
  std::stringstream ss(key.substr(2, key.size() - 3));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    int v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
    out.push_back(v);
  }
  return out;
}

double to_number(const std::string& text, const std::string& key, int line) {
  const std::string t = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(key, line, "expected a number, got '" + t + "'");
  }
  return v;
}

}  // namespace

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig cfg;
  cfg.digest_ = fnv1a_hex(text);
  std::string current;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;

    std::string line(raw);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line, lineno, "unterminated section header");
      current = trim(std::string_view(line).substr(1, line.size() - 2));
      int rank = 0;
      if (!allowed_keys().count(current) && !is_tensor_section(current, &rank)) {
        throw ConfigError("[" + current + "]", lineno, "unknown section");
      }
      if (cfg.sections_.count(current)) {
        throw ConfigError("[" + current + "]", lineno, "section declared twice");
      }
      cfg.sections_[current] = ConfigSection{current, lineno, {}};
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line, lineno, "expected 'key = value'");
    if (current.empty()) throw ConfigError(trim(line.substr(0, eq)), lineno, "key outside any section");
    std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const std::string qualified = current + "." + key;

    int rank = 0;
    if (is_tensor_section(current, &rank)) {
      if (key != "coupling") {
        auto idx = tensor_key(key);
        if (!idx) throw ConfigError(qualified, lineno, "unknown key");
        std::vector<int> sorted = *idx;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != *idx) {
          std::string canon = "S(";
          for (std::size_t i = 0; i < sorted.size(); ++i) canon += (i ? "," : "") + std::to_string(sorted[i]);
          canon += ")";
          cfg.warnings_.push_back("line " + std::to_string(lineno) + ": " + qualified +
                                  " normalized to " + current + "." + canon);
          key = canon;
        } else {
          std::string canon = "S(";
          for (std::size_t i = 0; i < sorted.size(); ++i) canon += (i ? "," : "") + std::to_string(sorted[i]);
          key = canon + ")";
        }
      }
    } else if (!allowed_keys().at(current).count(key)) {
      throw ConfigError(qualified, lineno, "unknown key");
    }

    auto& entries = cfg.sections_[current].entries;
    if (entries.count(key)) throw ConfigError(current + "." + key, lineno, "key given twice");
    entries[key] = ConfigEntry{value, lineno};
  }
  if (cfg.has("run")) {
    const double s = cfg.number("run", "seed", 0.0);
    if (s < 0 || s != static_cast<double>(static_cast<std::uint64_t>(s))) {
      throw ConfigError("run.seed", cfg.line_of("run", "seed"), "seed must be a non-negative integer");
    }
    cfg.seed_ = static_cast<std::uint64_t>(s);
  }
  cfg.validate();
  cfg.collect_tensors();
  // Resolve the named kinds now so a bad one is reported at parse time.
  if (cfg.has("metric")) cfg.metric();
  if (cfg.has("potential")) cfg.lagrangian();
  if (cfg.has("simulate") && !cfg.string("simulate", "gauge", "").empty()) cfg.gauge();
  return cfg;
}

bool RunConfig::has(const std::string& section) const { return sections_.count(section) > 0; }

const ConfigSection& RunConfig::section(const std::string& name) const {
  auto it = sections_.find(name);
  if (it == sections_.end()) throw ConfigError("[" + name + "]", 0, "missing required section");
  return it->second;
}

int RunConfig::line_of(const std::string& sec, const std::string& key) const {
  auto it = sections_.find(sec);
  if (it == sections_.end()) return 0;
  auto e = it->second.entries.find(key);
  return e == it->second.entries.end() ? it->second.line : e->second.line;
}

std::string RunConfig::string(const std::string& sec, const std::string& key,
                              std::optional<std::string> fallback) const {
  auto it = sections_.find(sec);
  if (it != sections_.end()) {
    auto e = it->second.entries.find(key);
    if (e != it->second.entries.end()) return e->second.value;
  }
  if (fallback) return *fallback;
  if (it == sections_.end()) throw ConfigError("[" + sec + "]", 0, "missing required section");
  throw ConfigError(sec + "." + key, it->second.line, "missing required key");
}

double RunConfig::number(const std::string& sec, const std::string& key,
                         std::optional<double> fallback) const {
  if (fallback && string(sec, key, "") .empty()) return *fallback;
  return to_number(string(sec, key), sec + "." + key, line_of(sec, key));
}

int RunConfig::integer(const std::string& sec, const std::string& key,
                       std::optional<int> fallback) const {
  const double v = number(sec, key, fallback ? std::optional<double>(*fallback) : std::nullopt);
  if (v != static_cast<double>(static_cast<int>(v))) {
    throw ConfigError(sec + "." + key, line_of(sec, key), "expected an integer");
  }
  return static_cast<int>(v);
}

Vector RunConfig::vector(const std::string& sec, const std::string& key,
                         std::optional<Vector> fallback) const {
  if (fallback && string(sec, key, "").empty()) return *fallback;
  const std::string text = string(sec, key);
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(to_number(item, sec + "." + key, line_of(sec, key)));
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

int RunConfig::dim() const {
  if (!has("metric")) return 4;
  if (!string("metric", "dim", "").empty()) return integer("metric", "dim");
  if (!string("metric", "diagonal", "").empty()) return static_cast<int>(vector("metric", "diagonal").size());
  return 4;
}

void RunConfig::validate() {
  static const std::set<std::string> kTextKeys = {"metric.kind", "potential.kind", "simulate.gauge", "brane.embedding",
                                                  "brane.file", "clifford.algebra", "clifford.form"};
  for (const auto& [name, sec] : sections_)
    for (const auto& [key, entry] : sec.entries)
      if (!kTextKeys.count(name + "." + key)) vector(name, key);
  const int n = dim();
  if (n < 1) throw ConfigError("metric.dim", line_of("metric", "dim"), "dimension must be positive");
  auto check_len = [&](const std::string& sec, const std::string& key, long expected,
                       const std::string& against) {
    if (!has(sec) || string(sec, key, "").empty()) return;
    const long got = vector(sec, key).size();
    if (got != expected) {
      throw ConfigError(sec + "." + key, line_of(sec, key),
                        "dimension mismatch: " + sec + "." + key + " has " + std::to_string(got) +
                            " components but " + against + " requires " + std::to_string(expected));
    }
  };
  const std::string dim_key = has("metric") && !string("metric", "dim", "").empty() ? "metric.dim" : "metric dimension";
  check_len("metric", "diagonal", n, dim_key);
  check_len("metric", "entries", static_cast<long>(n) * n, dim_key + " squared");
  check_len("metric", "wavevector", n - 1, dim_key + " minus one");
  check_len("potential", "value", n, dim_key);
  check_len("simulate", "x0", n, dim_key);
  check_len("simulate", "v0", n, dim_key);
  check_len("extremize", "start", n, dim_key);
  check_len("extremize", "end", n, dim_key);
  if (has("potential") && !string("potential", "plane", "").empty()) {
    const Vector plane = vector("potential", "plane");
    if (plane.size() != 2 || plane.minCoeff() < 0 || plane.maxCoeff() >= n || plane(0) == plane(1)) {
      throw ConfigError("potential.plane", line_of("potential", "plane"),
                        "expects two distinct axes below " + dim_key + " = " + std::to_string(n));
    }
  }
  for (const auto& [name, sec] : sections_) {
    int rank = 0;
    if (!is_tensor_section(name, &rank)) continue;
    if (rank < 3) throw ConfigError("[" + name + "]", sec.line, "extra tensor terms start at rank 3");
    for (const auto& [key, entry] : sec.entries) {
      if (key == "coupling") continue;
      const auto idx = *tensor_key(key);
      if (static_cast<int>(idx.size()) != rank) {
        throw ConfigError(name + "." + key, entry.line,
                          "multi-index has " + std::to_string(idx.size()) + " entries but the section rank is " +
                              std::to_string(rank));
      }
      for (int i : idx) {
        if (i < 0 || i >= n) {
          throw ConfigError(name + "." + key, entry.line,
                            "dimension mismatch: index " + std::to_string(i) + " outside " + dim_key +
                                " = " + std::to_string(n));
        }
      }
    }
  }
}

void RunConfig::collect_tensors() {
  const int n = dim();
  for (const auto& [name, sec] : sections_) {
    int rank = 0;
    if (!is_tensor_section(name, &rank)) continue;
    SymmetricTensorField t(rank, n);
    for (const auto& [key, entry] : sec.entries) {
      if (key == "coupling") continue;
      t.set(*tensor_key(key), to_number(entry.value, name + "." + key, entry.line));
    }
    tensors_.emplace(rank, std::move(t));
  }
}

MetricField RunConfig::metric() const {
  const int n = dim();
  const std::string kind = string("metric", "kind", "minkowski");
  const int line = line_of("metric", "kind");
  try {
    if (kind == "minkowski") return MetricField::minkowski(n);
    if (kind == "euclidean") return MetricField::euclidean(n);
    if (kind == "diagonal") return MetricField::diagonal(vector("metric", "diagonal"));
    if (kind == "matrix") {
      const Vector e = vector("metric", "entries");
      return MetricField::constant(Eigen::Map<const Matrix>(e.data(), n, n).transpose());
    }
    if (kind == "weak_field") {
      return MetricField::weak_field(n, number("metric", "amplitude"),
                                     vector("metric", "wavevector", Vector::Zero(n - 1)));
    }
  } catch (const Error& e) {
    throw ConfigError("metric", line, e.what());
  }
  throw ConfigError("metric.kind", line, "unknown metric kind '" + kind + "'");
}

LagrangianSpec RunConfig::lagrangian() const {
  const int n = dim();
  const double q = number("particle", "charge", 0.0);
  const double m = number("particle", "mass", 1.0);

  VectorPotentialField a = VectorPotentialField::zero(n);
  const std::string pk = string("potential", "kind", "zero");
  if (pk == "constant") {
    a = VectorPotentialField::constant(vector("potential", "value"));
  } else if (pk == "magnetic") {
    const Vector plane = vector("potential", "plane", Vector{{1.0, 2.0}});
    if (n < 3) throw ConfigError("potential.plane", line_of("potential", "plane"), "magnetic field needs dim >= 3");
    a = VectorPotentialField::uniform_magnetic(n, number("potential", "field"), static_cast<int>(plane(0)),
                                               static_cast<int>(plane(1)));
  } else if (pk != "zero") {
    throw ConfigError("potential.kind", line_of("potential", "kind"), "unknown potential kind '" + pk + "'");
  }

  std::vector<ExtraTerm> extras;
  for (const auto& [rank, t] : tensors_) {
    extras.push_back(ExtraTerm{number("tensor." + std::to_string(rank), "coupling", 1.0), t});
  }
  return LagrangianSpec(q, m, metric(), std::move(a), std::move(extras));
}

Gauge RunConfig::gauge() const {
  const std::string g = string("simulate", "gauge", "coordinate_time");
  if (g == "coordinate_time") return Gauge::CoordinateTime;
  if (g == "proper_time") return Gauge::ProperTime;
  throw ConfigError("simulate.gauge", line_of("simulate", "gauge"), "unknown gauge '" + g + "'");
}

RunConfig parse_config(std::string_view text) { return RunConfig::parse(text); }

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("--config", 0, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return RunConfig::parse(ss.str());
}

}  // namespace rim
