#include "rim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "rim/action.hpp"
#include "rim/brane.hpp"
#include "rim/clifford.hpp"
#include "rim/errors.hpp"
#include "rim/geometry.hpp"
#include "rim/sampling.hpp"
#include "rim/worldline.hpp"

#ifndef RIM_VERSION
#define RIM_VERSION "0.0.0"
#endif

namespace rim::cli {

using nlohmann::json;

namespace {

std::string num17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void dump_into(const json& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += std::string(",") + nl;
        first = false;
        out += pad + json(it.key()).dump() + (indent > 0 ? ": " : ":");
        dump_into(it.value(), indent, depth + 1, out);
      }
      out += nl + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      out += nl;
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += std::string(",") + nl;
        first = false;
        out += pad;
        dump_into(v, indent, depth + 1, out);
      }
      out += nl + close + "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? num17(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

// --- signature --------------------------------------------------------------

Matrix raw_metric(const RunConfig& cfg) {
  const int n = cfg.dim();
  const std::string kind = cfg.string("metric", "kind", "minkowski");
  if (kind == "diagonal") return cfg.vector("metric", "diagonal").asDiagonal();
  if (kind == "matrix") {
    const Vector e = cfg.vector("metric", "entries");
    return Eigen::Map<const Matrix>(e.data(), n, n).transpose();
  }
  return cfg.metric().at(Vector::Zero(n));
}

RunResult run_signature(const RunConfig& cfg) {
  cfg.section("metric");
  const Matrix g = raw_metric(cfg);
  const double tol = cfg.number("metric", "tolerance", kDefaultEigenTolerance);
  const SignatureReport sig = signature(g, tol);
  RunResult res;
  res.summary["signature"] = {{"n_plus", sig.n_plus},
                              {"n_minus", sig.n_minus},
                              {"n_zero", sig.n_zero},
                              {"tolerance", sig.tolerance},
                              {"eigenvalues", to_json(sig.eigenvalues)}};
  const CausalityClass cls = causality_class(sig);
  res.summary["class"] = std::string(to_string(cls.kind));
  if (cls.witness) {
    const auto& w = *cls.witness;
    res.summary["witness"] = {{"vector", to_json(w.original)},
                              {"eigenbasis_components", to_json(w.diagonal)},
                              {"time_axis", w.time_axis},
                              {"quadratic_form", w.quadratic_form},
                              {"spatial_speed_sq", w.speed_sq}};
  }
  return res;
}

// --- check ------------------------------------------------------------------

RunResult run_check(const RunConfig& cfg) {
  const int samples = cfg.integer("check", "samples", 1000);
  if (samples < 1) throw ConfigError("check.samples", cfg.line_of("check", "samples"), "must be positive");
  RunResult res;
  json rows = json::array();
  bool all = true;
  for (const auto& r : run_property_sweeps(cfg.seed(), samples)) {
    rows.push_back({{"property", r.property},
                    {"samples", r.samples},
                    {"max_residual", r.max_residual},
                    {"tolerance", r.tolerance},
                    {"pass", r.pass}});
    all = all && r.pass;
  }
  res.summary["properties"] = rows;
  res.summary["pass"] = all;
  if (!all) res.exit_code = kPhysicsError;
  return res;
}

// --- simulate ---------------------------------------------------------------

RunResult run_simulate(const RunConfig& cfg) {
  cfg.section("simulate");
  const LagrangianSpec spec = cfg.lagrangian();
  const int n = spec.dim();
  const Gauge gauge = cfg.gauge();
  const Vector x0 = cfg.vector("simulate", "x0", Vector::Zero(n));
  const Vector v0 = cfg.vector("simulate", "v0");
  const double tau_end = cfg.number("simulate", "tau_end");
  const double step = cfg.number("simulate", "step", 1e-3);
  const int stride = cfg.integer("simulate", "stride", 1);
  if (step <= 0.0) throw ConfigError("simulate.step", cfg.line_of("simulate", "step"), "must be positive");
  if (tau_end <= 0.0) throw ConfigError("simulate.tau_end", cfg.line_of("simulate", "tau_end"), "must be positive");
  if (stride < 1) throw ConfigError("simulate.stride", cfg.line_of("simulate", "stride"), "must be positive");

  const Worldline wl = integrate(spec, gauge, x0, v0, tau_end, step);

  std::ostringstream csv;
  csv << "tau";
  for (int k = 0; k < n; ++k) csv << ",x" << k;
  for (int k = 0; k < n; ++k) csv << ",v" << k;
  csv << ",mass_shell_residual\n";
  double worst_shell = 0.0, worst_renorm = 0.0;
  for (std::size_t i = 0; i < wl.samples.size(); ++i) {
    const auto& s = wl.samples[i];
    worst_shell = std::max(worst_shell, s.mass_shell_residual);
    worst_renorm = std::max(worst_renorm, s.renormalization);
    if (i % static_cast<std::size_t>(stride) != 0 && i + 1 != wl.samples.size()) continue;
    csv << num17(s.tau);
    for (int k = 0; k < n; ++k) csv << ',' << num17(s.x(k));
    for (int k = 0; k < n; ++k) csv << ',' << num17(s.v(k));
    csv << ',' << num17(s.mass_shell_residual) << '\n';
  }

  RunResult res;
  res.csv = csv.str();
  const auto& last = wl.samples.back();
  res.summary["gauge"] = std::string(to_string(gauge));
  res.summary["steps"] = static_cast<int>(wl.samples.size()) - 1;
  res.summary["tau_end"] = last.tau;
  res.summary["final_x"] = to_json(last.x);
  res.summary["final_v"] = to_json(last.v);
  res.summary["max_mass_shell_residual"] = worst_shell;
  res.summary["max_renormalization"] = worst_renorm;
  res.summary["conserved_drift"] = conserved_drift(wl, spec);
  return res;
}

// --- extremize --------------------------------------------------------------

RunResult run_extremize(const RunConfig& cfg) {
  cfg.section("extremize");
  const LagrangianSpec spec = cfg.lagrangian();
  const Vector start = cfg.vector("extremize", "start");
  const Vector end = cfg.vector("extremize", "end");
  const int k = cfg.integer("extremize", "interior", 9);
  if (k < 1) throw ConfigError("extremize.interior", cfg.line_of("extremize", "interior"), "must be positive");
  const double amp = cfg.number("extremize", "perturbation", 0.0);
  ExtremizeOptions opts;
  opts.max_iters = cfg.integer("extremize", "max_iters", opts.max_iters);
  opts.grad_tol = cfg.number("extremize", "grad_tol", opts.grad_tol);

  Matrix perturbation = Matrix::Zero(k, start.size());
  if (amp != 0.0) {
    std::mt19937_64 rng(cfg.seed());
    std::uniform_real_distribution<double> u(-amp, amp);
    for (Eigen::Index i = 0; i < perturbation.size(); ++i) perturbation(i) = u(rng);
  }
  const ExtremizeResult r = extremize(spec, chord_path(start, end, k, perturbation), opts);

  std::ostringstream csv;
  csv << "index";
  for (int a = 0; a < start.size(); ++a) csv << ",x" << a;
  csv << '\n';
  const Matrix pts = r.path.points();
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    csv << i;
    for (Eigen::Index a = 0; a < pts.cols(); ++a) csv << ',' << num17(pts(i, a));
    csv << '\n';
  }

  RunResult res;
  res.csv = csv.str();
  res.summary["action"] = r.action;
  res.summary["grad_norm"] = r.grad_norm;
  res.summary["iterations"] = r.iterations;
  res.summary["degenerate_modes"] = r.degenerate_modes;
  res.summary["converged"] = r.converged;
  if (!r.diagnostic.empty()) res.summary["diagnostic"] = r.diagnostic;
  return res;
}

// --- brane ------------------------------------------------------------------

Matrix read_rows(const std::string& path, int line) {
  std::ifstream in(path);
  if (!in) throw ConfigError("brane.file", line, "cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string text;
  while (std::getline(in, text)) {
    if (text.empty() || text[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(text);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (rows.empty()) continue;  // header
      throw ConfigError("brane.file", line, "non-numeric row in '" + path + "'");
    }
    if (!rows.empty() && row.size() != rows[0].size()) {
      throw ConfigError("brane.file", line, "ragged rows in '" + path + "'");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("brane.file", line, "no data rows in '" + path + "'");
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return out;
}

BraneEmbedding builtin_embedding(const RunConfig& cfg, const std::string& kind) {
  const int pts = cfg.integer("brane", "points", 129);
  if (pts < 2) throw ConfigError("brane.points", cfg.line_of("brane", "points"), "need at least 2 nodes per axis");
  const std::vector<int> points{pts, pts};
  if (kind == "plane") {
    const double w = cfg.number("brane", "width", 2.0), h = cfg.number("brane", "height", 1.0);
    return BraneEmbedding::analytic(
        2, 3, {{0.0, w}, {0.0, h}}, points, [](const Vector& z) { return Vector{{z(0), z(1), 0.0}}; },
        [](const Vector&) { return Matrix{{1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}}; });
  }
  if (kind == "tilted_plane") {
    const double s = cfg.number("brane", "slope", 0.75);
    return BraneEmbedding::analytic(
        2, 3, {{0.0, 1.0}, {0.0, 1.0}}, points, [s](const Vector& z) { return Vector{{z(0), z(1), s * z(0)}}; },
        [s](const Vector&) { return Matrix{{1.0, 0.0}, {0.0, 1.0}, {s, 0.0}}; });
  }
  if (kind == "graph") {
    const double a = cfg.number("brane", "amplitude", 0.1);
    constexpr double pi = std::numbers::pi;
    return BraneEmbedding::analytic(
        2, 3, {{0.0, 1.0}, {0.0, 1.0}}, points,
        [a](const Vector& z) { return Vector{{z(0), z(1), a * std::sin(pi * z(0)) * std::sin(pi * z(1))}}; },
        [a](const Vector& z) {
          return Matrix{{1.0, 0.0},
                        {0.0, 1.0},
                        {a * pi * std::cos(pi * z(0)) * std::sin(pi * z(1)),
                         a * pi * std::sin(pi * z(0)) * std::cos(pi * z(1))}};
        });
  }
  if (kind == "cylinder") {
    const double r = cfg.number("brane", "radius", 1.0);
    const double phi = cfg.number("brane", "angle", std::numbers::pi / 2);
    const double h = cfg.number("brane", "height", 1.0);
    return BraneEmbedding::analytic(
        2, 3, {{0.0, phi}, {0.0, h}}, points,
        [r](const Vector& z) { return Vector{{r * std::cos(z(0)), r * std::sin(z(0)), z(1)}}; },
        [r](const Vector& z) { return Matrix{{-r * std::sin(z(0)), 0.0}, {r * std::cos(z(0)), 0.0}, {0.0, 1.0}}; });
  }
  throw ConfigError("brane.embedding", cfg.line_of("brane", "embedding"), "unknown embedding '" + kind + "'");
}

RunResult run_brane(const RunConfig& cfg) {
  cfg.section("brane");
  const std::string kind = cfg.string("brane", "embedding");
  const bool from_file = kind == "file";
  const int target = from_file ? cfg.dim() : 3;
  if (cfg.has("metric") && cfg.dim() != target) {
    throw ConfigError("brane.embedding", cfg.line_of("brane", "embedding"),
                      "dimension mismatch: embedding '" + kind + "' targets dimension " + std::to_string(target) +
                          " but metric.dim is " + std::to_string(cfg.dim()));
  }
  const BraneEmbedding emb = from_file
                                 ? BraneEmbedding::from_rows(cfg.integer("brane", "brane_dim", 2), target,
                                                             read_rows(cfg.string("brane", "file"), cfg.line_of("brane", "file")))
                                 : builtin_embedding(cfg, kind);
  BraneSpec spec(cfg.has("metric") ? cfg.metric() : MetricField::euclidean(target), emb.brane_dim());
  spec.tension = cfg.number("brane", "tension", 1.0);
  spec.charge = cfg.number("brane", "charge", 1.0);

  RunResult res;
  res.summary["embedding"] = kind;
  res.summary["brane_dim"] = emb.brane_dim();
  res.summary["target_dim"] = emb.target_dim();
  res.summary["action"] = brane_action(spec, emb);
  res.summary["component_count"] = component_count(target, emb.brane_dim());
  res.summary["gauge_deviation"] = integral_gauge_check(emb);
  res.summary["cells"] = emb.cell_count();
  return res;
}

// --- clifford ---------------------------------------------------------------

RunResult run_clifford(const RunConfig& cfg) {
  const std::string alg_name = cfg.string("clifford", "algebra", "lorentz");
  const std::string form_name = cfg.string("clifford", "form", "minkowski");
  const double magnitude = cfg.number("clifford", "perturbation", 0.0);
  const int trials = cfg.integer("clifford", "trials", 100);
  const int samples = cfg.integer("clifford", "samples", 1000);
  if (trials < 1 || samples < 1) {
    throw ConfigError("clifford.trials", cfg.line_of("clifford", "trials"), "trials and samples must be positive");
  }

  BilinearForm form;
  if (form_name == "minkowski") {
    form = BilinearForm::Minkowski;
  } else if (form_name == "euclidean") {
    form = BilinearForm::Euclidean;
  } else {
    throw ConfigError("clifford.form", cfg.line_of("clifford", "form"), "unknown form '" + form_name + "'");
  }
  const GammaSet gam = build_dirac_gammas(form);

  LieAlgebraSpec alg;
  if (alg_name == "lorentz") {
    alg = lorentz_algebra(gam.form);
  } else if (alg_name == "so3") {
    alg = rotation_algebra(gam.form);
  } else if (alg_name == "abelian") {
    alg = abelian_algebra(gam.count());
  } else {
    throw ConfigError("clifford.algebra", cfg.line_of("clifford", "algebra"), "unknown algebra '" + alg_name + "'");
  }

  const RundSolution sol = rund_solve(alg, gam);
  RunResult res;
  res.summary["algebra"] = alg_name;
  res.summary["form"] = form_name;
  res.summary["generators"] = alg.names;
  res.summary["residuals"] = sol.residuals;
  res.summary["kernel_dims"] = sol.kernel_dims;
  res.summary["constrained_kernel_dims"] = sol.constrained_kernel_dims;
  res.summary["span_rank"] = sol.span_rank;
  res.summary["anticommutator_residual"] = anticommutator_residual(gam);
  res.summary["closure_residual"] = verify_lie_closure(sol, alg);
  res.summary["covariance_residual"] = vector_covariance_check(sol, alg, gam);
  res.summary["form_preservation_residual"] =
      form_preservation_residual(induced_representation(sol, gam), gam.form);

  std::mt19937_64 rng(cfg.seed());
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst_rel = 0.0, worst_on_shell = 0.0;
  const Matrix g = gam.form.inverse();
  for (int s = 0; s < samples; ++s) {
    Vector pi(4);
    for (int k = 0; k < 4; ++k) pi(k) = u(rng);
    const double m = std::abs(u(rng)) + 0.1;
    const double scale = std::pow(pi.squaredNorm() + m * m, 2);
    worst_rel = std::max(worst_rel, mass_shell_determinant_residual(0.0, m, Vector::Zero(4), pi, gam) / scale);
    // Put pi on the shell pi.h.pi = m^2 along its first axis.
    const double rest = pi.tail(3).dot(gam.form.bottomRightCorner(3, 3) * pi.tail(3));
    const double p0sq = (m * m - rest) / gam.form(0, 0);
    if (p0sq >= 0.0) {
      pi(0) = std::sqrt(p0sq);
      const double det = std::abs(dirac_operator(0.0, m, Vector::Zero(4), pi, gam).determinant());
      worst_on_shell = std::max(worst_on_shell, det / scale);
    }
  }
  res.summary["determinant_check"] = {{"samples", samples},
                                      {"max_relative_residual", worst_rel},
                                      {"max_on_shell_relative_determinant", worst_on_shell}};
  res.summary["trace_identity_residual"] = mass_term_trace_identity(gam, g);
  res.summary["mass_normalization"] = {{"strict_sqrt_n", strict_mass_normalization(gam, g)}, {"unit", 1.0}};

  if (magnitude > 0.0) {
    double lo = INFINITY, hi = 0.0;
    for (int t = 0; t < trials; ++t) {
      const int index = static_cast<int>(rng() % static_cast<std::uint64_t>(gam.count()));
      const double r = rund_solve(alg, perturb_gamma(gam, index, magnitude, rng)).max_residual();
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    res.summary["perturbed"] = {{"magnitude", magnitude}, {"trials", trials}, {"min_residual", lo}, {"max_residual", hi}};
  }
  return res;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"signature", "check", "simulate", "extremize", "brane", "clifford"};
  return names;
}

std::string version() { return RIM_VERSION; }

std::string dump_json(const json& j, int indent) {
  std::string out;
  dump_into(j, indent, 0, out);
  return out;
}

RunResult run(const std::string& subcommand, const RunConfig& cfg) {
  RunResult res;
  try {
    if (subcommand == "signature") {
      res = run_signature(cfg);
    } else if (subcommand == "check") {
      res = run_check(cfg);
    } else if (subcommand == "simulate") {
      res = run_simulate(cfg);
    } else if (subcommand == "extremize") {
      res = run_extremize(cfg);
    } else if (subcommand == "brane") {
      res = run_brane(cfg);
    } else if (subcommand == "clifford") {
      res = run_clifford(cfg);
    } else {
      throw ConfigError("", 0, "unknown subcommand '" + subcommand + "'");
    }
  } catch (const Error& e) {
    res = RunResult{};
    res.exit_code = kPhysicsError;
    res.summary["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
  }
  json head = {{"subcommand", subcommand},
               {"version", version()},
               {"config_digest", cfg.digest()},
               {"seed", cfg.seed()}};
  if (!cfg.warnings().empty()) head["warnings"] = cfg.warnings();
  head.update(res.summary);
  res.summary = std::move(head);
  return res;
}

int execute(const std::string& subcommand, const Options& opts, std::ostream& out, std::ostream& err) {
  RunResult res;
  try {
    RunConfig cfg = opts.config_path.empty() ? RunConfig::empty() : load_config(opts.config_path);
    if (opts.seed) cfg.set_seed(*opts.seed);
    for (const auto& w : cfg.warnings()) err << "warning: " << w << '\n';
    res = run(subcommand, cfg);
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kConfigError;
  }
  if (res.exit_code == kPhysicsError && res.summary.contains("error")) {
    err << "error: " << res.summary["error"]["message"].get<std::string>() << '\n';
  }

  const std::string text = dump_json(res.summary) + "\n";
  if (!opts.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(opts.out_dir, ec);
    const std::filesystem::path dir(opts.out_dir);
    std::ofstream(dir / (subcommand + ".json"), std::ios::binary) << text;
    if (!res.csv.empty()) std::ofstream(dir / (subcommand + ".csv"), std::ios::binary) << res.csv;
    if (!std::filesystem::exists(dir / (subcommand + ".json"))) {
      err << "cannot write to '" << opts.out_dir << "'\n";
      return kConfigError;
    }
  }
  if (opts.json || opts.out_dir.empty()) out << text;
  return res.exit_code;
}

}  // namespace rim::cli
