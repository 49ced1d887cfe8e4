#include "rim/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace rim {

SpecSampler::SpecSampler(std::uint64_t seed, int dim) : rng_(seed), dim_(dim) {}

double SpecSampler::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

MetricField SpecSampler::random_metric() {
  const int choice = std::uniform_int_distribution<int>(0, 2)(rng_);
  if (choice == 0) {
    Vector d(dim_);
    d(0) = uniform(0.5, 2.0);
    for (int i = 1; i < dim_; ++i) d(i) = -uniform(0.5, 2.0);
    return MetricField::diagonal(d);
  }
  if (choice == 1) {
    Matrix p = Matrix::Identity(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) p(i, j) += uniform(-0.2, 0.2);
    Vector eta = Vector::Constant(dim_, -1.0);
    eta(0) = 1.0;
    Matrix g = p.transpose() * eta.asDiagonal() * p;
    g = 0.5 * (g + g.transpose());
    return MetricField::constant(g);
  }
  Vector k(dim_ - 1);
  for (int i = 0; i < dim_ - 1; ++i) k(i) = uniform(-2.0, 2.0);
  return MetricField::weak_field(dim_, uniform(0.02, 0.2), k);
}

VectorPotentialField SpecSampler::random_potential() {
  const int choice = std::uniform_int_distribution<int>(0, 2)(rng_);
  if (choice == 0) return VectorPotentialField::zero(dim_);
  if (choice == 1) {
    Vector a(dim_);
    for (int i = 0; i < dim_; ++i) a(i) = uniform(-1.0, 1.0);
    return VectorPotentialField::constant(a);
  }
  const int i = std::uniform_int_distribution<int>(1, dim_ - 2)(rng_);
  return VectorPotentialField::uniform_magnetic(dim_, uniform(-2.0, 2.0), i, i + 1);
}

std::optional<Vector> SpecSampler::random_timelike(const LagrangianSpec& spec, const Vector& x) {
  const Matrix g = spec.metric.at(x);
  for (int attempt = 0; attempt < 500; ++attempt) {
    Vector v(dim_);
    v(0) = uniform(0.5, 2.0);
    for (int i = 1; i < dim_; ++i) v(i) = uniform(-0.8, 0.8) * v(0);
    if (quadratic_form(g, v) <= 0.05 * v.squaredNorm()) continue;
    bool ok = true;
    for (const auto& term : spec.extras) {
      const double t = term.tensor.eval(x, v);
      if (std::abs(t) < 0.05 * std::pow(v.norm(), term.tensor.rank())) ok = false;
    }
    if (ok) return v;
  }
  return std::nullopt;
}

SampleDraw SpecSampler::draw() {
  // Some tensor draws leave no admissible velocity cone; draw again.
  for (;;) {
    if (auto d = try_draw()) return std::move(*d);
  }
}

std::optional<SampleDraw> SpecSampler::try_draw() {
  LagrangianSpec spec(random_metric());
  spec.charge = uniform(-2.0, 2.0);
  spec.mass = uniform(0.5, 3.0);
  spec.potential = random_potential();

  if (uniform(0.0, 1.0) < 0.75) {
    SymmetricTensorField s3(3, dim_);
    const int entries = std::uniform_int_distribution<int>(1, 4)(rng_);
    for (int e = 0; e < entries; ++e) {
      std::vector<int> idx(3);
      for (int& a : idx) a = std::uniform_int_distribution<int>(0, dim_ - 1)(rng_);
      s3.set(idx, uniform(-1.0, 1.0));
    }
    if (uniform(0.0, 1.0) < 0.5) {
      Vector k(dim_);
      for (int i = 0; i < dim_; ++i) k(i) = uniform(-1.0, 1.0);
      const double amp = uniform(0.1, 0.4);
      s3.set_modulation([k, amp](const Vector& y) { return 1.0 + amp * std::sin(k.dot(y)); },
                        [k, amp](const Vector& y) -> Vector {
                          return amp * std::cos(k.dot(y)) * k;
                        });
    }
    spec.extras.push_back({uniform(-1.0, 1.0), std::move(s3)});
  }
  if (uniform(0.0, 1.0) < 0.75) {
    // (v^T P v)^2 with P symmetric positive definite keeps the radicand > 0.
    Matrix b(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) b(i, j) = uniform(-1.0, 1.0);
    const Matrix p = b * b.transpose() + 0.5 * Matrix::Identity(dim_, dim_);
    std::map<std::vector<int>, double> poly;
    for (int a = 0; a < dim_; ++a)
      for (int bb = 0; bb < dim_; ++bb)
        for (int c = 0; c < dim_; ++c)
          for (int d = 0; d < dim_; ++d) {
            std::vector<int> e(static_cast<std::size_t>(dim_), 0);
            ++e[static_cast<std::size_t>(a)];
            ++e[static_cast<std::size_t>(bb)];
            ++e[static_cast<std::size_t>(c)];
            ++e[static_cast<std::size_t>(d)];
            poly[e] += p(a, bb) * p(c, d);
          }
    spec.extras.push_back(
        {uniform(0.0, 1.0), SymmetricTensorField::from_polynomial(4, dim_, poly)});
  }
  spec.validate();

  Vector x(dim_);
  for (int i = 0; i < dim_; ++i) x(i) = uniform(-1.0, 1.0);
  std::optional<Vector> v = random_timelike(spec, x);
  if (!v) return std::nullopt;
  const double lambda = std::pow(10.0, uniform(-3.0, 3.0));
  return SampleDraw{std::move(spec), std::move(x), std::move(*v), lambda};
}

double lagrangian_scale(const LagrangianSpec& spec, const Vector& x, const Vector& v) {
  double s = std::abs(spec.charge * spec.potential.at(x).dot(v));
  if (spec.mass > 0.0) s += spec.mass * std::sqrt(std::abs(quadratic_form(spec.metric.at(x), v)));
  for (const auto& term : spec.extras) {
    s += std::abs(term.coupling * signed_root(std::abs(term.tensor.eval(x, v)), term.tensor.rank()));
  }
  return s;
}

std::vector<PropertyResult> run_property_sweeps(std::uint64_t seed, int samples) {
  std::vector<PropertyResult> out = {
      {"homogeneity", samples, 0.0, 1e-11, false},
      {"euler_identity_analytic", samples, 0.0, 1e-10, false},
      {"euler_identity_finite_difference", samples, 0.0, 1e-6, false},
      {"mass_shell", samples, 0.0, 1e-9, false},
      {"momentum_vs_finite_difference", samples, 0.0, 1e-6, false},
      {"generalized_momentum_invariance", samples, 0.0, 1e-12, false},
      {"gauge_shift", samples, 0.0, 1e-10, false},
  };
  SpecSampler sampler(seed);
  auto bump = [](PropertyResult& r, double value) {
    r.max_residual = std::max(r.max_residual, value);
  };
  for (int s = 0; s < samples; ++s) {
    SampleDraw d = sampler.draw();
    const LagrangianSpec& spec = d.spec;

    bump(out[0], std::abs(homogeneity_residual(spec, d.x, d.v, d.lambda)) /
                     (d.lambda * lagrangian_scale(spec, d.x, d.v)));

    const double scale = lagrangian_scale(spec, d.x, d.v);
    bump(out[1], std::abs(hamiltonian_residual(spec, d.x, d.v)) / scale);
    bump(out[2],
         std::abs(hamiltonian_residual(spec, d.x, d.v, DerivativeMode::FiniteDifference)) / scale);
    bump(out[3], std::abs(mass_shell_residual(spec, d.x, d.v)) / (spec.mass * spec.mass));

    const Vector p = momentum(spec, d.x, d.v);
    const Vector p_fd = momentum(spec, d.x, d.v, DerivativeMode::FiniteDifference);
    bump(out[4], (p - p_fd).cwiseAbs().maxCoeff() / std::max(1.0, p.cwiseAbs().maxCoeff()));

    // Randomize everything except (m, g, v); pi must not move.
    const Vector pi = generalized_momentum(spec, d.x, d.v);
    LagrangianSpec other = sampler.draw().spec;
    LagrangianSpec mixed(other.charge, spec.mass, spec.metric, other.potential, {});
    for (const auto& term : other.extras) {
      if (term.tensor.rank() == 4) mixed.extras.push_back(term);
    }
    const Vector pi_mixed = generalized_momentum(mixed, d.x, d.v);
    bump(out[5], (pi - pi_mixed).cwiseAbs().maxCoeff() / std::max(1.0, pi.cwiseAbs().maxCoeff()));

    // A -> A + grad f with f = c sin(k.x).
    Vector k(spec.dim());
    for (int i = 0; i < spec.dim(); ++i) k(i) = sampler.uniform(-1.0, 1.0);
    const double c = sampler.uniform(-1.0, 1.0);
    const VectorPotentialField base = spec.potential;
    auto shifted = VectorPotentialField::user(
        spec.dim(), [base, k, c](const Vector& y) -> Vector { return base.at(y) + c * std::cos(k.dot(y)) * k; },
        [base, k, c](const Vector& y) -> Matrix {
          return base.jacobian(y) - c * std::sin(k.dot(y)) * k * k.transpose();
        });
    LagrangianSpec gauged(spec.charge, spec.mass, spec.metric, shifted, spec.extras);
    const Vector dp = momentum(gauged, d.x, d.v) - p;
    const Vector expected = spec.charge * c * std::cos(k.dot(d.x)) * k;
    double gauge_err = (dp - expected).cwiseAbs().maxCoeff();
    gauge_err = std::max(gauge_err,
                         (generalized_momentum(gauged, d.x, d.v) - pi).cwiseAbs().maxCoeff());
    bump(out[6], gauge_err / std::max(1.0, p.cwiseAbs().maxCoeff()));
  }
  for (auto& r : out) r.pass = r.max_residual <= r.tolerance;
  return out;
}

}  // namespace rim
