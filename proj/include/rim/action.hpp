#pragma once

#include <string>

#include "rim/canonical_lagrangian.hpp"

namespace rim {

/// Polyline between fixed endpoints. Row k of `interior` is the (k+1)-th
/// point; there are K interior points and K+1 segments.
struct DiscretePath {
  Vector start;
  Vector end;
  Matrix interior;

  int size() const noexcept { return static_cast<int>(interior.rows()); }
  int dim() const noexcept { return static_cast<int>(start.size()); }
  /// All K+2 points, endpoints included.
  Matrix points() const;
};

/// Uniform points on the straight chord, plus an optional K x N perturbation.
DiscretePath chord_path(const Vector& start, const Vector& end, int interior_points,
                        const Matrix& perturbation = Matrix());

/// sum_k L(midpoint_k, dx_k). Throws Errc::SpacelikeSegment when a segment
/// has g(dx, dx) < 0 and the mass term is present.
double discrete_action(const LagrangianSpec& spec, const DiscretePath& path);

/// dS / d(interior points), K x N.
Matrix action_gradient(const LagrangianSpec& spec, const DiscretePath& path);

/// |sum_k L(midpoint_k, dx_k / dtau_k) dtau_k - discrete_action| for K+1
/// positive parameter steps.
double reparam_invariance_residual(const LagrangianSpec& spec, const DiscretePath& path,
                                   const Vector& dtau);

struct ExtremizeOptions {
  int max_iters = 200;
  double grad_tol = 1e-10;
  /// Hessian eigenvalues below this fraction of the largest count as degenerate.
  double degenerate_ratio = 1e-6;
};

struct ExtremizeResult {
  DiscretePath path;
  double action = 0.0;
  double grad_norm = 0.0;  // max-norm of dS/dx over interior points
  int iterations = 0;
  int degenerate_modes = 0;
  bool converged = false;
  std::string diagnostic;
};

/// Stationary point of the discrete action over the interior points.
/// Minimizes |grad S|^2 with a damped Gauss-Newton (Levenberg-Marquardt)
/// iteration whose Jacobian is the finite-difference Hessian of the analytic
/// gradient. Non-convergence is reported in the result, not thrown.
ExtremizeResult extremize(const LagrangianSpec& spec, const DiscretePath& path0,
                          const ExtremizeOptions& opts = {});

}  // namespace rim
