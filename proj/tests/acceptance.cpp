// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "oracles.hpp"
#include "rim/action.hpp"
#include "rim/brane.hpp"
#include "rim/clifford.hpp"
#include "rim/errors.hpp"
#include "rim/geometry.hpp"
#include "rim/sampling.hpp"
#include "rim/worldline.hpp"

using namespace rim;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  if (!ok) ++failures;
  std::printf("[%s] %2d %-28s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void guarded(int id, const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, name, false, std::string("threw: ") + e.what());
  }
}

const PropertyResult& find(const std::vector<PropertyResult>& rows, const std::string& name) {
  for (const auto& r : rows)
    if (r.property == name) return r;
  throw std::runtime_error("missing property " + name);
}

std::vector<PropertyResult> sweep;
double sweep_seconds = 0.0;

void homogeneity() {
  const auto t0 = Clock::now();
  sweep = run_property_sweeps(0, 1000);
  sweep_seconds = seconds_since(t0);
  const auto& h = find(sweep, "homogeneity");
  report(1, "homogeneity", h.samples >= 1000 && h.max_residual <= 1e-11 && sweep_seconds < 5.0,
         fmt("samples=%d max_rel=%.3e (<=1e-11) sweep=%.3fs (<5s)", h.samples, h.max_residual, sweep_seconds));
}

void euler_identity() {
  const auto& a = find(sweep, "euler_identity_analytic");
  const auto& f = find(sweep, "euler_identity_finite_difference");
  report(2, "euler_identity", a.max_residual <= 1e-10 && f.max_residual <= 1e-6,
         fmt("analytic=%.3e (<=1e-10) finite_difference=%.3e (<=1e-6)", a.max_residual, f.max_residual));
}

void mass_shell() {
  const auto& m = find(sweep, "mass_shell");
  const auto& inv = find(sweep, "generalized_momentum_invariance");
  // Fixed (m, g, v) with q, A and Q_n varied.
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  const Vector x{{0.2, 0.1, -0.3, 0.4}}, v{{1.0, 0.3, -0.2, 0.1}};
  const auto g = MetricField::weak_field(4, 0.1, Vector{{1.0, 0.5, 0.0}});
  const double base = mass_shell_residual(LagrangianSpec(0.0, 1.3, g, VectorPotentialField::zero(4)), x, v);
  double spread = 0.0;
  for (int t = 0; t < 100; ++t) {
    LagrangianSpec spec(u(rng), 1.3, g, VectorPotentialField::constant(Vector{{u(rng), u(rng), u(rng), u(rng)}}));
    SymmetricTensorField s3(3, 4);
    s3.set({0, 0, 0}, 1.0);
    s3.set({0, 1, 2}, u(rng));
    spec.extras.push_back({0.1 * u(rng), s3});
    spread = std::max(spread, std::abs(mass_shell_residual(spec, x, v) - base));
  }
  report(3, "mass_shell", m.max_residual <= 1e-9 && inv.max_residual <= inv.tolerance && spread <= 1e-9,
         fmt("max=%.3e (<=1e-9) spread_over_q_A_Q=%.3e", m.max_residual, spread));
}

void causality() {
  bool ok = true;
  auto diag = [](std::initializer_list<double> d) {
    Vector v(static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (double x : d) v(i++) = x;
    return Matrix(v.asDiagonal());
  };
  ok &= causality_class(signature(diag({-1, -1, -1}))).kind == Causality::NoTimeInfeasible;
  ok &= causality_class(signature(diag({1, -1, -1, -1}))).kind == Causality::OneTimeBounded;
  ok &= causality_class(signature(diag({1, 1, -1, -1}))).kind == Causality::MultiTimeUnbounded;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  int witnesses = 0;
  double worst_q = 0.0, min_speed = 1e300;
  for (const Matrix& g0 : {diag({1, 1, -1, -1}), diag({2, 1, 0.5, -1, -3}), diag({1, 1, 1}), diag({1, 3, -2})}) {
    for (int t = 0; t < 100; ++t) {
      const int n = static_cast<int>(g0.rows());
      Matrix p(n, n);
      do {
        for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = u(rng);
      } while (std::abs(p.determinant()) < 0.1);
      Matrix g = p.transpose() * g0 * p;
      g = 0.5 * (g + g.transpose());
      const auto cls = causality_class(signature(g));
      ok &= cls.kind == Causality::MultiTimeUnbounded && cls.witness.has_value();
      if (!cls.witness) continue;
      ++witnesses;
      worst_q = std::min(worst_q, quadratic_form(g, cls.witness->original));
      min_speed = std::min(min_speed, cls.witness->speed_sq);
    }
  }
  ok &= worst_q >= -1e-12 && min_speed > 1.0;
  report(4, "causality_classification", ok,
         fmt("3 families mapped; %d witnesses min g(w,w)=%.3e min speed^2=%.4f (>1)", witnesses, worst_q, min_speed));
}

void cyclotron() {
  const oracle::Cyclotron cyc;
  const LagrangianSpec spec(1.0, 1.0, MetricField::minkowski(4), VectorPotentialField::uniform_magnetic(4, 1.0, 1, 2));
  const auto t0 = Clock::now();
  const Worldline wl = integrate(spec, Gauge::CoordinateTime, cyc.x(0), cyc.v(0), 10.0, 1e-3);
  const double secs = seconds_since(t0);
  double radius_err = 0.0, shell = 0.0;
  for (const auto& s : wl.samples) {
    radius_err = std::max(radius_err, std::abs(std::hypot(s.x(1), s.x(2) + 0.75) - 0.75));
    shell = std::max(shell, std::abs(s.mass_shell_residual));
  }
  const double drift = conserved_drift(wl, spec);
  std::vector<double> errs;
  for (double h : {0.08, 0.04, 0.02, 0.01, 0.005}) {
    const Worldline w = integrate(spec, Gauge::CoordinateTime, cyc.x(0), cyc.v(0), 10.0, h);
    errs.push_back((w.samples.back().x - cyc.x(10.0)).norm());
  }
  double omin = 1e300, omax = -1e300;
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double o = std::log2(errs[i - 1] / errs[i]);
    omin = std::min(omin, o);
    omax = std::max(omax, o);
  }
  const bool ok = wl.samples.size() == 10001 && radius_err <= 1e-6 && secs < 1.0 && shell <= 1e-8 && drift <= 1e-8 &&
                  omin >= 3.8 && omax <= 4.2;
  report(5, "relativistic_cyclotron", ok,
         fmt("radius_err=%.3e (<=1e-6) t=%.3fs (<1s) mass_shell=%.3e p0_drift=%.3e (<=1e-8) order=[%.3f,%.3f]", radius_err, secs,
             shell, drift, omin, omax));
}

void geodesic() {
  const LagrangianSpec spec(0.0, 1.0, MetricField::minkowski(4), VectorPotentialField::zero(4));
  const Vector a = Vector::Zero(4), b{{1.0, 0.3, 0.0, 0.0}};
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> u(-0.01, 0.01);
  Matrix pert(9, 4);
  for (Eigen::Index i = 0; i < pert.size(); ++i) pert(i) = u(rng);
  const ExtremizeResult r = extremize(spec, chord_path(a, b, 9, pert));
  const Vector dir = b.normalized();
  double lateral = 0.0;
  for (int i = 0; i < r.path.size(); ++i) {
    const Vector p = r.path.interior.row(i).transpose();
    lateral = std::max(lateral, (p - p.dot(dir) * dir).norm());
  }
  std::uniform_real_distribution<double> w(0.01, 100.0);
  double reparam = 0.0;
  for (int t = 0; t < 1000; ++t) {
    Vector dtau(10);
    for (int i = 0; i < 10; ++i) dtau(i) = w(rng);
    reparam = std::max(reparam, reparam_invariance_residual(spec, r.path, dtau) / std::abs(r.action));
  }
  const double err = std::abs(r.action - std::sqrt(0.91));
  report(6, "geodesic_extremization", r.converged && err <= 1e-6 && lateral <= 1e-6 && reparam <= 1e-11,
         fmt("action=%.9f |S-sqrt(0.91)|=%.3e lateral=%.3e reparam=%.3e", r.action, err, lateral, reparam));
}

void brane() {
  bool ok = component_count(4, 2) == 6;
  const BraneSpec euclid(MetricField::euclidean(3), 2);
  const auto rect = BraneEmbedding::analytic(2, 3, {{0, 1}, {0, 2}}, {2, 2}, [](const Vector& z) { return Vector{{z(0), z(1), 0}}; },
                                             [](const Vector&) { return Matrix{{1, 0}, {0, 1}, {0, 0}}; });
  const double area = brane_action(euclid, rect);
  ok &= area == 2.0;
  const auto tilted = BraneEmbedding::analytic(2, 3, {{0, 1}, {0, 1}}, {129, 129},
                                               [](const Vector& z) { return Vector{{z(0), z(1), 0.75 * z(0)}}; });
  const double tilt = brane_action(euclid, tilted);
  ok &= std::abs(tilt - 1.25) <= 1e-6;

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2, 2);
  double plucker = 0.0;
  for (int t = 0; t < 1000; ++t) {
    Matrix j(4, 2);
    for (Eigen::Index i = 0; i < j.size(); ++i) j(i) = u(rng);
    const Vector w = jacobian_minors(j);
    plucker = std::max(plucker, std::abs(w(0) * w(5) - w(1) * w(4) + w(2) * w(3)));
  }
  ok &= plucker <= 1e-10;

  const Vector a{{0.3, -0.2, 0.1, 0.05}};
  auto curve = [](double t) { return Vector{{t, 0.3 * std::sin(t), 0.2 * t * t, 0.0}}; };
  auto tangent = [](double t) { return Vector{{1.0, 0.3 * std::cos(t), 0.4 * t, 0.0}}; };
  const auto line = BraneEmbedding::analytic(1, 4, {{0, 1}}, {4001}, [&](const Vector& z) { return curve(z(0)); },
                                             [&](const Vector& z) { return Matrix(tangent(z(0))); });
  BraneSpec one(MetricField::minkowski(4), 1);
  one.charge = 0.7;
  one.tension = 1.3;
  one.potential = BranePotential::constant(a);
  const LagrangianSpec particle(0.7, 1.3, MetricField::minkowski(4), VectorPotentialField::constant(a));
  const double reduced = std::abs(brane_action(one, line) -
                                  oracle::integrate1([&](double t) { return eval_L(particle, curve(t), tangent(t)); }, 0, 1, 40));
  ok &= reduced <= 1e-8;
  report(7, "brane", ok,
         fmt("C(4,2)=%d rect=%.17g tilted_err=%.3e plucker=%.3e D1_vs_particle=%.3e", component_count(4, 2), area,
             std::abs(tilt - 1.25), plucker, reduced));
}

void rund() {
  const GammaSet mk = build_dirac_gammas(BilinearForm::Minkowski);
  const LieAlgebraSpec alg = lorentz_algebra(mk.form);
  const RundSolution sol = rund_solve(alg, mk);
  double spin = 0.0;
  int i = 0;
  for (int m = 0; m < 4; ++m)
    for (int n = m + 1; n < 4; ++n, ++i) {
      const CMatrix& gm = mk.gammas[static_cast<std::size_t>(m)];
      const CMatrix& gn = mk.gammas[static_cast<std::size_t>(n)];
      spin = std::max(spin, (sol.generators[static_cast<std::size_t>(i)] - 0.25 * (gm * gn - gn * gm)).norm());
    }
  const double closure = verify_lie_closure(sol, alg);
  const double cov = vector_covariance_check(sol, alg, mk);
  std::mt19937_64 rng(0);
  int detected = 0;
  double weakest = 1e300;
  for (int t = 0; t < 100; ++t) {
    const GammaSet bent = perturb_gamma(mk, t % 4, 0.05, rng);
    const double r = rund_solve(alg, bent).max_residual();
    weakest = std::min(weakest, r);
    if (r >= 1e-4) ++detected;
  }
  const bool ok = sol.max_residual() <= 1e-10 && spin <= 1e-10 && closure <= 1e-10 && cov <= 1e-10 && detected == 100;
  report(8, "rund_procedure", ok,
         fmt("residual=%.3e spin_err=%.3e closure=%.3e covariance=%.3e perturbed %d/100 (min %.3e)", sol.max_residual(), spin, closure,
             cov, detected, weakest));
}

void dirac_determinant() {
  const GammaSet mk = build_dirac_gammas(BilinearForm::Minkowski);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2, 2);
  double rel = 0.0, shell = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Vector p{{u(rng), u(rng), u(rng), u(rng)}};
    const double m = std::abs(u(rng)) + 0.05;
    const double pi2 = p(0) * p(0) - p.tail(3).squaredNorm();
    const double scale = std::pow(p.squaredNorm() + m * m, 2);
    const std::complex<double> det = oracle::laplace_det(dirac_operator(0.0, m, Vector::Zero(4), p, mk));
    rel = std::max(rel, std::abs(det - (pi2 - m * m) * (pi2 - m * m)) / scale);
    const Vector s = p.tail(3);
    const Vector on{{std::sqrt(m * m + s.squaredNorm()), s(0), s(1), s(2)}};
    shell = std::max(shell, std::abs(oracle::laplace_det(dirac_operator(0.0, m, Vector::Zero(4), on, mk))) /
                                std::pow(on.squaredNorm() + m * m, 2));
  }
  report(9, "dirac_determinant", rel <= 1e-9 && shell <= 1e-12, fmt("max_rel=%.3e (<=1e-9) on_shell=%.3e (<=1e-12)", rel, shell));
}

void trace_identity() {
  const GammaSet mk = build_dirac_gammas(BilinearForm::Minkowski);
  const GammaSet eu = build_dirac_gammas(BilinearForm::Euclidean);
  const double rm = mass_term_trace_identity(mk, mk.form);
  const double re = mass_term_trace_identity(eu, Matrix::Identity(4, 4));
  report(10, "trace_identity", rm <= 1e-13 && re <= 1e-13, fmt("minkowski=%.3e euclidean=%.3e (<=1e-13)", rm, re));
}

void nonrel() {
  const LagrangianSpec particle(0.4, 1.0, MetricField::minkowski(4), VectorPotentialField::constant(Vector{{0.2, 0.1, 0.0, -0.3}}));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  double worst_particle = 0.0;
  for (int i = 1; i <= 300; ++i) {
    Vector dir{{n(rng), n(rng), n(rng)}};
    const Vector w = 0.001 * i * dir.normalized();
    const auto e = nonrel_expand(particle, Vector::Zero(4), w);
    worst_particle = std::max(worst_particle, std::abs(e.exact - e.quadratic) / std::pow(w.norm(), 4));
  }
  BraneSpec spec(MetricField::diagonal(Vector{{1, 1, -1}}), 2);
  double worst_brane = 0.0;
  for (int i = 1; i <= 300; ++i) {
    const double s = 0.001 * i, th = n(rng);
    const double c = s * std::cos(th), d = s * std::sin(th);
    const auto emb = BraneEmbedding::analytic(2, 3, {{0, 1}, {0, 1}}, {3, 3},
                                              [=](const Vector& z) { return Vector{{z(0), z(1), c * z(0) + d * z(1)}}; },
                                              [=](const Vector&) { return Matrix{{1, 0}, {0, 1}, {c, d}}; });
    const auto e = nonrel_brane_expand(spec, emb, 0);
    worst_brane = std::max(worst_brane, std::abs(e.exact - e.quadratic) / std::pow(e.spatial_norm, 4));
  }
  report(11, "nonrelativistic_expansion", worst_particle <= 0.2 && worst_brane <= 0.2,
         fmt("max |exact-quadratic|/|w|^4: particle=%.4f brane=%.4f (<=0.2)", worst_particle, worst_brane));
}

}  // namespace

int main() {
  guarded(1, "homogeneity", homogeneity);
  guarded(2, "euler_identity", euler_identity);
  guarded(3, "mass_shell", mass_shell);
  guarded(4, "causality_classification", causality);
  guarded(5, "relativistic_cyclotron", cyclotron);
  guarded(6, "geodesic_extremization", geodesic);
  guarded(7, "brane", brane);
  guarded(8, "rund_procedure", rund);
  guarded(9, "dirac_determinant", dirac_determinant);
  guarded(10, "trace_identity", trace_identity);
  guarded(11, "nonrelativistic_expansion", nonrel);
  std::printf("%d/11 criteria passed\n", 11 - failures);
  return failures == 0 ? 0 : 1;
}
