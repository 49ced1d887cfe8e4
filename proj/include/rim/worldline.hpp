#pragma once

#include <string_view>
#include <vector>

#include "rim/canonical_lagrangian.hpp"

namespace rim {

/// Trajectory parameter choice that removes the reparametrization freedom.
///   CoordinateTime: v^0 = 1, the parameter is x^0.
///   ProperTime:     g(v,v) = 1, enforced by projecting v after each step.
enum class Gauge { CoordinateTime, ProperTime };

std::string_view to_string(Gauge g) noexcept;

inline constexpr double kGaugeTolerance = 1e-8;

struct WorldlineSample {
  double tau;
  Vector x;
  Vector v;
  double mass_shell_residual;
  /// |sqrt(g(v,v)) - 1| removed by the proper-time projection (0 otherwise).
  double renormalization;
};

struct Worldline {
  Gauge gauge = Gauge::CoordinateTime;
  std::vector<WorldlineSample> samples;
};

/// d/dtau (dL/dv) - dL/dx along (x, v, a), chain rule expanded.
Vector el_residual(const LagrangianSpec& spec, const Vector& x, const Vector& v, const Vector& a);

/// Acceleration that satisfies the Euler-Lagrange equations in the given gauge.
/// CoordinateTime solves the reduced (N-1)x(N-1) spatial velocity Hessian;
/// ProperTime solves the Hessian bordered by the constraint d/dtau g(v,v) = 0.
/// Throws Errc::SingularReducedHessian at degenerate points.
Vector gauge_acceleration(const LagrangianSpec& spec, Gauge gauge, const Vector& x,
                          const Vector& v);

/// Fixed-step RK4 from (x0, v0) to tau_end. The number of steps is
/// ceil(tau_end / step), spaced uniformly. Requires a mass term.
Worldline integrate(const LagrangianSpec& spec, Gauge gauge, const Vector& x0, const Vector& v0,
                    double tau_end, double step);

/// max |mass_shell_residual| over the samples.
double conserved_drift(const Worldline& wl, const LagrangianSpec& spec);

}  // namespace rim
