#include "rim/worldline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "rim/errors.hpp"

namespace rim {

std::string_view to_string(Gauge g) noexcept {
  switch (g) {
    case Gauge::CoordinateTime: return "coordinate_time";
    case Gauge::ProperTime: return "proper_time";
  }
  return "unknown";
}

namespace {

constexpr double kSingularRatio = 1e-12;

void require_invertible(const Matrix& h, const char* what) {
  Eigen::JacobiSVD<Matrix> svd(h);
  const Vector s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) <= kSingularRatio * s(0)) {
    throw Error(Errc::SingularReducedHessian, what);
  }
}

void check_gauge(const LagrangianSpec& spec, Gauge gauge, const Vector& x, const Vector& v,
                 double tau) {
  double dev = 0.0;
  if (gauge == Gauge::CoordinateTime) {
    dev = std::abs(v(0) - 1.0);
  } else {
    dev = std::abs(quadratic_form(spec.metric.at(x), v) - 1.0);
  }
  if (dev > kGaugeTolerance) {
    throw Error(Errc::GaugeViolation, std::string(to_string(gauge)) + " condition off by " +
                                          std::to_string(dev) + " at tau = " +
                                          std::to_string(tau));
  }
}

}  // namespace

Vector el_residual(const LagrangianSpec& spec, const Vector& x, const Vector& v, const Vector& a) {
  require_dim(a.size(), spec.dim(), "acceleration");
  const LagrangianJet jet = lagrangian_jet(spec, x, v);
  return jet.hessian_vv * a + jet.mixed * v - jet.dL_dx;
}

Vector gauge_acceleration(const LagrangianSpec& spec, Gauge gauge, const Vector& x,
                          const Vector& v) {
  const int n = spec.dim();
  const LagrangianJet jet = lagrangian_jet(spec, x, v);
  const Vector rhs = jet.dL_dx - jet.mixed * v;
  Vector acc = Vector::Zero(n);
  if (gauge == Gauge::CoordinateTime) {
    const Matrix h = jet.hessian_vv.bottomRightCorner(n - 1, n - 1);
    require_invertible(h, "reduced spatial velocity Hessian is singular");
    acc.tail(n - 1) = h.fullPivLu().solve(rhs.tail(n - 1));
    return acc;
  }
  // [[H, c], [c^T, 0]] [a; mu] = [rhs; d] with c = g v and
  // d = -1/2 (d_k g)(v, v) v^k so that g(v,v) stays constant.
  const Matrix g = spec.metric.at(x);
  const std::vector<Matrix> dg = spec.metric.gradient(x);
  const Vector c = g * v;
  double d = 0.0;
  for (int k = 0; k < n; ++k) d -= 0.5 * v.dot(dg[static_cast<std::size_t>(k)] * v) * v(k);
  Matrix bordered = Matrix::Zero(n + 1, n + 1);
  bordered.topLeftCorner(n, n) = jet.hessian_vv;
  bordered.block(0, n, n, 1) = c;
  bordered.block(n, 0, 1, n) = c.transpose();
  require_invertible(bordered, "bordered proper-time Hessian is singular");
  Vector b(n + 1);
  b.head(n) = rhs;
  b(n) = d;
  acc = bordered.fullPivLu().solve(b).head(n);
  return acc;
}

Worldline integrate(const LagrangianSpec& spec, Gauge gauge, const Vector& x0, const Vector& v0,
                    double tau_end, double step) {
  const int n = spec.dim();
  require_dim(x0.size(), n, "initial position");
  require_dim(v0.size(), n, "initial velocity");
  if (!(spec.mass > 0.0)) {
    throw Error(Errc::Unsupported, "world-line dynamics require a mass term (m > 0)");
  }
  if (!(step > 0.0) || !(tau_end > 0.0)) {
    throw Error(Errc::OutOfDomain, "step and tau_end must be positive");
  }
  check_gauge(spec, gauge, x0, v0, 0.0);

  const long steps = std::max(1L, static_cast<long>(std::ceil(tau_end / step - 1e-9)));
  const double h = tau_end / static_cast<double>(steps);

  Worldline wl;
  wl.gauge = gauge;
  wl.samples.reserve(static_cast<std::size_t>(steps + 1));
  wl.samples.push_back({0.0, x0, v0, mass_shell_residual(spec, x0, v0), 0.0});

  // State y = (x, v); in coordinate time v^0 stays 1 because a^0 = 0.
  auto rhs = [&](const Vector& y) {
    Vector dy(2 * n);
    dy.head(n) = y.tail(n);
    dy.tail(n) = gauge_acceleration(spec, gauge, y.head(n), y.tail(n));
    return dy;
  };

  Vector y(2 * n);
  y << x0, v0;
  for (long s = 1; s <= steps; ++s) {
    const Vector k1 = rhs(y);
    const Vector k2 = rhs(y + 0.5 * h * k1);
    const Vector k3 = rhs(y + 0.5 * h * k2);
    const Vector k4 = rhs(y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double tau = static_cast<double>(s) * h;
    Vector x = y.head(n);
    Vector v = y.tail(n);
    double renorm = 0.0;
    if (gauge == Gauge::ProperTime) {
      const double q = quadratic_form(spec.metric.at(x), v);
      if (!(q > 0.0)) {
        throw Error(Errc::SpacelikeVelocity,
                    "velocity left the timelike cone at tau = " + std::to_string(tau));
      }
      const double norm = std::sqrt(q);
      renorm = std::abs(norm - 1.0);
      v /= norm;
      y.tail(n) = v;
    }
    check_gauge(spec, gauge, x, v, tau);
    wl.samples.push_back({tau, x, v, mass_shell_residual(spec, x, v), renorm});
  }
  return wl;
}

double conserved_drift(const Worldline& wl, const LagrangianSpec& spec) {
  double worst = 0.0;
  for (const auto& s : wl.samples) {
    worst = std::max(worst, std::abs(mass_shell_residual(spec, s.x, s.v)));
  }
  return worst;
}

}  // namespace rim
