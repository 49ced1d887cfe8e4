#include "rim/canonical_lagrangian.hpp"

#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "rim/errors.hpp"

namespace rim {

std::string_view to_string(PotentialKind kind) noexcept {
  switch (kind) {
    case PotentialKind::Zero: return "zero";
    case PotentialKind::Constant: return "constant";
    case PotentialKind::UniformMagnetic: return "uniform-magnetic";
    case PotentialKind::UserSupplied: return "user-supplied";
  }
  return "unknown";
}

// --- VectorPotentialField ---------------------------------------------------

VectorPotentialField::VectorPotentialField(int dim, PotentialKind kind, Evaluator eval,
                                           JacobianFn jac)
    : dim_(dim), kind_(kind), eval_(std::move(eval)), jac_(std::move(jac)) {}

VectorPotentialField VectorPotentialField::zero(int dim) {
  return VectorPotentialField(
      dim, PotentialKind::Zero, [dim](const Vector&) { return Vector::Zero(dim); },
      [dim](const Vector&) { return Matrix::Zero(dim, dim); });
}

VectorPotentialField VectorPotentialField::constant(const Vector& a) {
  const int dim = static_cast<int>(a.size());
  return VectorPotentialField(
      dim, PotentialKind::Constant, [a](const Vector&) { return a; },
      [dim](const Vector&) { return Matrix::Zero(dim, dim); });
}

VectorPotentialField VectorPotentialField::uniform_magnetic(int dim, double b, int i, int j) {
  if (i < 0 || j < 0 || i >= dim || j >= dim || i == j) {
    throw Error(Errc::DimensionMismatch, "uniform magnetic field plane indices out of range");
  }
  Evaluator eval = [dim, b, i, j](const Vector& x) {
    Vector a = Vector::Zero(dim);
    a(i) = 0.5 * b * x(j);
    a(j) = -0.5 * b * x(i);
    return a;
  };
  JacobianFn jac = [dim, b, i, j](const Vector&) {
    Matrix m = Matrix::Zero(dim, dim);
    m(i, j) = 0.5 * b;
    m(j, i) = -0.5 * b;
    return m;
  };
  return VectorPotentialField(dim, PotentialKind::UniformMagnetic, std::move(eval),
                              std::move(jac));
}

VectorPotentialField VectorPotentialField::user(int dim, Evaluator eval, JacobianFn jac) {
  if (!jac) {
    jac = [dim, eval](const Vector& x) {
      Matrix m(dim, dim);
      for (int k = 0; k < dim; ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(x(k)));
        Vector xp = x, xm = x;
        xp(k) += h;
        xm(k) -= h;
        m.col(k) = (eval(xp) - eval(xm)) / (2.0 * h);
      }
      return m;
    };
  }
  return VectorPotentialField(dim, PotentialKind::UserSupplied, std::move(eval), std::move(jac));
}

Vector VectorPotentialField::at(const Vector& x) const {
  require_dim(x.size(), dim_, "potential position");
  Vector a = eval_(x);
  require_dim(a.size(), dim_, "potential value");
  return a;
}

Matrix VectorPotentialField::jacobian(const Vector& x) const {
  require_dim(x.size(), dim_, "potential position");
  return jac_(x);
}

// --- LagrangianSpec ---------------------------------------------------------

LagrangianSpec::LagrangianSpec(MetricField g)
    : metric(std::move(g)), potential(VectorPotentialField::zero(metric.dim())) {}

LagrangianSpec::LagrangianSpec(double q, double m, MetricField g, VectorPotentialField a,
                               std::vector<ExtraTerm> extra)
    : charge(q), mass(m), metric(std::move(g)), potential(std::move(a)), extras(std::move(extra)) {
  validate();
}

void LagrangianSpec::validate() const {
  if (!(mass >= 0.0)) throw Error(Errc::OutOfDomain, "mass must be nonnegative");
  require_dim(potential.dim(), metric.dim(), "vector potential");
  std::set<int> ranks;
  for (const auto& term : extras) {
    require_dim(term.tensor.dim(), metric.dim(), "extra tensor term");
    if (term.tensor.rank() < 3) {
      throw Error(Errc::OutOfDomain, "extra tensor terms start at rank 3");
    }
    if (!ranks.insert(term.tensor.rank()).second) {
      throw Error(Errc::OutOfDomain,
                  "duplicate extra term of rank " + std::to_string(term.tensor.rank()));
    }
  }
}

// --- evaluation -------------------------------------------------------------

double signed_root(double value, int n) {
  if (n == 1) return value;
  if (n == 2) return std::sqrt(value);
  if (n == 3) return std::cbrt(value);
  if (value < 0.0 && n % 2 == 1) return -std::pow(-value, 1.0 / n);
  return std::pow(value, 1.0 / n);
}

namespace {

void check_velocity(const LagrangianSpec& spec, const Vector& x, const Vector& v) {
  require_dim(x.size(), spec.dim(), "position");
  require_dim(v.size(), spec.dim(), "velocity");
}

double mass_radicand(const LagrangianSpec& spec, const Matrix& g, const Vector& v) {
  const double q = quadratic_form(g, v);
  if (spec.mass > 0.0 && q < 0.0) {
    throw Error(Errc::SpacelikeVelocity, "g(v,v) = " + std::to_string(q) + " < 0");
  }
  return q;
}

double extra_value(const ExtraTerm& term, const Vector& x, const Vector& v) {
  const int n = term.tensor.rank();
  const double t = term.tensor.eval(x, v);
  if (n % 2 == 0 && t < 0.0) {
    throw Error(Errc::NegativeEvenRadicand,
                "S_" + std::to_string(n) + "(v,...,v) = " + std::to_string(t) + " < 0");
  }
  return term.coupling * signed_root(t, n);
}

// Shared pieces of an extra term for momenta: r = root(f T0), T0, grad T0.
struct ExtraLocal {
  int n;
  double root;
  double t0;
  Vector grad_t0;
};

ExtraLocal extra_local(const ExtraTerm& term, const Vector& x, const Vector& v) {
  ExtraLocal e{term.tensor.rank(), 0.0, term.tensor.contract(v), term.tensor.gradient(v)};
  const double t = term.tensor.modulation(x) * e.t0;
  if (e.n % 2 == 0 && t < 0.0) {
    throw Error(Errc::NegativeEvenRadicand,
                "S_" + std::to_string(e.n) + "(v,...,v) = " + std::to_string(t) + " < 0");
  }
  if (t == 0.0) {
    throw Error(Errc::SingularTensorTerm,
                "S_" + std::to_string(e.n) + "(v,...,v) = 0, momentum undefined");
  }
  e.root = signed_root(t, e.n);
  return e;
}

double mass_momentum_radicand(const LagrangianSpec& spec, const Matrix& g, const Vector& v) {
  const double q = mass_radicand(spec, g, v);
  if (spec.mass > 0.0 && q == 0.0) {
    throw Error(Errc::NullVelocity, "g(v,v) = 0, mass-term momentum undefined");
  }
  return q;
}

}  // namespace

double eval_S(const SymmetricTensorField& s, const Vector& x, const Vector& v) {
  require_dim(x.size(), s.dim(), "tensor position");
  return s.eval(x, v);
}

double eval_L(const LagrangianSpec& spec, const Vector& x, const Vector& v) {
  check_velocity(spec, x, v);
  double value = spec.charge * spec.potential.at(x).dot(v);
  if (spec.mass > 0.0) {
    value += spec.mass * std::sqrt(mass_radicand(spec, spec.metric.at(x), v));
  }
  for (const auto& term : spec.extras) value += extra_value(term, x, v);
  return value;
}

MomentumTerms momentum_terms(const LagrangianSpec& spec, const Vector& x, const Vector& v) {
  check_velocity(spec, x, v);
  const int n = spec.dim();
  MomentumTerms out{spec.charge * spec.potential.at(x), Vector::Zero(n), Vector::Zero(n)};
  if (spec.mass > 0.0) {
    const Matrix g = spec.metric.at(x);
    const double q = mass_momentum_radicand(spec, g, v);
    out.mass = spec.mass * (g * v) / std::sqrt(q);
  }
  for (const auto& term : spec.extras) {
    const ExtraLocal e = extra_local(term, x, v);
    out.extra += term.coupling * e.root / (e.n * e.t0) * e.grad_t0;
  }
  return out;
}

Vector momentum(const LagrangianSpec& spec, const Vector& x, const Vector& v,
                DerivativeMode mode) {
  if (mode == DerivativeMode::Analytic) return momentum_terms(spec, x, v).total();
  check_velocity(spec, x, v);
  Vector p(spec.dim());
  for (int a = 0; a < spec.dim(); ++a) {
    const double h = kFiniteDifferenceStep * std::max(1.0, std::abs(v(a)));
    Vector vp = v, vm = v;
    vp(a) += h;
    vm(a) -= h;
    p(a) = (eval_L(spec, x, vp) - eval_L(spec, x, vm)) / (2.0 * h);
  }
  return p;
}

Vector generalized_momentum(const LagrangianSpec& spec, const Vector& x, const Vector& v) {
  check_velocity(spec, x, v);
  if (spec.mass == 0.0) return Vector::Zero(spec.dim());
  const Matrix g = spec.metric.at(x);
  const double q = mass_momentum_radicand(spec, g, v);
  return spec.mass * (g * v) / std::sqrt(q);
}

double hamiltonian_residual(const LagrangianSpec& spec, const Vector& x, const Vector& v,
                            DerivativeMode mode) {
  return momentum(spec, x, v, mode).dot(v) - eval_L(spec, x, v);
}

double relative_hamiltonian_residual(const LagrangianSpec& spec, const Vector& x,
                                     const Vector& v, DerivativeMode mode) {
  const double pv = momentum(spec, x, v, mode).dot(v);
  const double l = eval_L(spec, x, v);
  const double scale = std::abs(pv) + std::abs(l);
  return scale > 0.0 ? std::abs(pv - l) / scale : std::abs(pv - l);
}

double mass_shell_residual(const LagrangianSpec& spec, const Vector& x, const Vector& v) {
  const Vector pi = generalized_momentum(spec, x, v);
  const Matrix g = spec.metric.at(x);
  return pi.dot(g.partialPivLu().solve(pi)) - spec.mass * spec.mass;
}

double homogeneity_residual(const LagrangianSpec& spec, const Vector& x, const Vector& v,
                            double lambda) {
  if (!(lambda > 0.0)) throw Error(Errc::OutOfDomain, "scale factor must be positive");
  return eval_L(spec, x, lambda * v) - lambda * eval_L(spec, x, v);
}

NonrelExpansion nonrel_expand(const LagrangianSpec& spec, const Vector& x,
                              const Vector& omega_space) {
  const int n = spec.dim();
  require_dim(x.size(), n, "position");
  require_dim(omega_space.size(), n - 1, "spatial velocity");
  const Matrix g = spec.metric.at(x);
  const Matrix off = g - Matrix(g.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() > 1e-14) {
    throw Error(Errc::NotOneTime, "metric is not diagonal in this chart");
  }
  if (std::abs(g(0, 0) - 1.0) > 1e-12) {
    throw Error(Errc::NotOneTime, "metric is not normalized to g_00 = 1");
  }
  for (int i = 1; i < n; ++i) {
    if (!(g(i, i) < 0.0)) throw Error(Errc::NotOneTime, "metric has more than one time axis");
  }

  Vector v(n);
  v(0) = 1.0;
  v.tail(n - 1) = omega_space;

  NonrelExpansion out{eval_L(spec, x, v), 0.0};
  const Vector a = spec.potential.at(x);
  double kinetic = 0.0;
  for (int i = 1; i < n; ++i) kinetic += std::abs(g(i, i)) * v(i) * v(i);
  out.quadratic = spec.charge * a.dot(v) + spec.mass * (1.0 - 0.5 * kinetic);
  for (const auto& term : spec.extras) out.quadratic += extra_value(term, x, v);
  return out;
}

LagrangianJet lagrangian_jet(const LagrangianSpec& spec, const Vector& x, const Vector& v) {
  check_velocity(spec, x, v);
  const int n = spec.dim();
  LagrangianJet jet;
  jet.p = Vector::Zero(n);
  jet.dL_dx = Vector::Zero(n);
  jet.hessian_vv = Matrix::Zero(n, n);
  jet.mixed = Matrix::Zero(n, n);

  // q A.v
  const Vector a = spec.potential.at(x);
  const Matrix da = spec.potential.jacobian(x);
  jet.value += spec.charge * a.dot(v);
  jet.p += spec.charge * a;
  jet.mixed += spec.charge * da;
  jet.dL_dx += spec.charge * da.transpose() * v;

  // m sqrt(g(v,v))
  if (spec.mass > 0.0) {
    const Matrix g = spec.metric.at(x);
    const std::vector<Matrix> dg = spec.metric.gradient(x);
    const double q = mass_momentum_radicand(spec, g, v);
    const double root = std::sqrt(q);
    const Vector gv = g * v;
    jet.value += spec.mass * root;
    jet.p += spec.mass * gv / root;
    jet.hessian_vv += spec.mass * (g / root - gv * gv.transpose() / (q * root));
    for (int k = 0; k < n; ++k) {
      const Matrix& dgk = dg[static_cast<std::size_t>(k)];
      const double dq = v.dot(dgk * v);
      jet.dL_dx(k) += spec.mass * dq / (2.0 * root);
      jet.mixed.col(k) += spec.mass * (dgk * v / root - gv * dq / (2.0 * q * root));
    }
  }

  // Q_n root_n(f(x) S0(v,...,v))
  for (const auto& term : spec.extras) {
    const ExtraLocal e = extra_local(term, x, v);
    const double inv_n = 1.0 / e.n;
    const Vector p_term = term.coupling * e.root * inv_n / e.t0 * e.grad_t0;
    jet.value += term.coupling * e.root;
    jet.p += p_term;
    jet.hessian_vv += term.coupling * e.root *
                      (inv_n * (inv_n - 1.0) / (e.t0 * e.t0) * e.grad_t0 * e.grad_t0.transpose() +
                       inv_n / e.t0 * term.tensor.hessian(v));
    if (term.tensor.has_modulation()) {
      const double f = term.tensor.modulation(x);
      const Vector df = term.tensor.modulation_gradient(x);
      jet.dL_dx += term.coupling * e.root * inv_n / f * df;
      jet.mixed += p_term * (inv_n / f * df).transpose();
    }
  }
  return jet;
}

}  // namespace rim
