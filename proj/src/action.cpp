#include "rim/action.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "rim/errors.hpp"

namespace rim {

Matrix DiscretePath::points() const {
  const int k = size();
  Matrix pts(k + 2, dim());
  pts.row(0) = start.transpose();
  if (k > 0) pts.middleRows(1, k) = interior;
  pts.row(k + 1) = end.transpose();
  return pts;
}

DiscretePath chord_path(const Vector& start, const Vector& end, int interior_points,
                        const Matrix& perturbation) {
  require_dim(end.size(), start.size(), "path endpoint");
  if (interior_points < 1) throw Error(Errc::OutOfDomain, "path needs at least one interior point");
  DiscretePath path{start, end, Matrix(interior_points, start.size())};
  for (int k = 0; k < interior_points; ++k) {
    const double t = static_cast<double>(k + 1) / static_cast<double>(interior_points + 1);
    path.interior.row(k) = ((1.0 - t) * start + t * end).transpose();
  }
  if (perturbation.size() > 0) {
    require_dim(perturbation.rows(), interior_points, "perturbation rows");
    require_dim(perturbation.cols(), start.size(), "perturbation columns");
    path.interior += perturbation;
  }
  return path;
}

namespace {

struct SegmentJet {
  Vector p;
  Vector dL_dx;
};

void check_path(const LagrangianSpec& spec, const DiscretePath& path) {
  require_dim(path.dim(), spec.dim(), "path");
  require_dim(path.end.size(), spec.dim(), "path end");
  require_dim(path.interior.cols(), spec.dim(), "path interior");
}

void check_segment(const LagrangianSpec& spec, const Vector& mid, const Vector& dx, int k,
                   bool strict) {
  if (spec.mass <= 0.0) return;
  const double q = quadratic_form(spec.metric.at(mid), dx);
  if (q < 0.0 || (strict && q == 0.0)) {
    throw Error(Errc::SpacelikeSegment, "segment " + std::to_string(k) + " has g(dx,dx) = " +
                                            std::to_string(q));
  }
}

SegmentJet segment_jet(const LagrangianSpec& spec, const Matrix& pts, int k) {
  const Vector a = pts.row(k).transpose();
  const Vector b = pts.row(k + 1).transpose();
  const Vector mid = 0.5 * (a + b);
  const Vector dx = b - a;
  check_segment(spec, mid, dx, k, true);
  LagrangianJet jet = lagrangian_jet(spec, mid, dx);
  return {std::move(jet.p), std::move(jet.dL_dx)};
}

// Gradient row for interior point j (1..K) from its two adjacent segments.
Vector gradient_row(const SegmentJet& before, const SegmentJet& after) {
  return before.p - after.p + 0.5 * (before.dL_dx + after.dL_dx);
}

bool path_valid(const LagrangianSpec& spec, const Matrix& pts) {
  if (spec.mass <= 0.0) return true;
  for (int k = 0; k + 1 < pts.rows(); ++k) {
    const Vector a = pts.row(k).transpose();
    const Vector b = pts.row(k + 1).transpose();
    if (!(quadratic_form(spec.metric.at(0.5 * (a + b)), b - a) > 0.0)) return false;
  }
  return true;
}

Vector flatten(const Matrix& interior) {
  Vector out(interior.size());
  for (int k = 0; k < interior.rows(); ++k) out.segment(k * interior.cols(), interior.cols()) = interior.row(k).transpose();
  return out;
}

Matrix unflatten(const Vector& flat, int rows, int cols) {
  Matrix out(rows, cols);
  for (int k = 0; k < rows; ++k) out.row(k) = flat.segment(k * cols, cols).transpose();
  return out;
}

// Central-difference Hessian of the analytic gradient. Moving point j only
// touches segments j-1 and j, hence gradient rows j-1, j, j+1.
Matrix fd_hessian(const LagrangianSpec& spec, const DiscretePath& path) {
  const int kk = path.size();
  const int n = path.dim();
  const Matrix base = path.points();
  std::vector<SegmentJet> seg;
  seg.reserve(static_cast<std::size_t>(kk + 1));
  for (int k = 0; k <= kk; ++k) seg.push_back(segment_jet(spec, base, k));

  Matrix hess = Matrix::Zero(kk * n, kk * n);
  for (int j = 1; j <= kk; ++j) {
    for (int c = 0; c < n; ++c) {
      const double h = 1e-6 * std::max(1.0, std::abs(base(j, c)));
      Matrix diff = Matrix::Zero(3, n);
      for (int sign : {+1, -1}) {
        Matrix pts = base;
        pts(j, c) += sign * h;
        const SegmentJet left = segment_jet(spec, pts, j - 1);
        const SegmentJet right = segment_jet(spec, pts, j);
        // rows j-1, j, j+1
        if (j - 1 >= 1) diff.row(0) += sign * gradient_row(seg[static_cast<std::size_t>(j - 2)], left).transpose();
        diff.row(1) += sign * gradient_row(left, right).transpose();
        if (j + 1 <= kk) diff.row(2) += sign * gradient_row(right, seg[static_cast<std::size_t>(j + 1)]).transpose();
      }
      diff /= 2.0 * h;
      const int col = (j - 1) * n + c;
      for (int r = 0; r < 3; ++r) {
        const int row_point = j - 1 + r;
        if (row_point < 1 || row_point > kk) continue;
        hess.block((row_point - 1) * n, col, n, 1) = diff.row(r).transpose();
      }
    }
  }
  return 0.5 * (hess + hess.transpose());
}

}  // namespace

double discrete_action(const LagrangianSpec& spec, const DiscretePath& path) {
  check_path(spec, path);
  const Matrix pts = path.points();
  double total = 0.0;
  for (int k = 0; k + 1 < pts.rows(); ++k) {
    const Vector a = pts.row(k).transpose();
    const Vector b = pts.row(k + 1).transpose();
    const Vector mid = 0.5 * (a + b);
    check_segment(spec, mid, b - a, k, false);
    total += eval_L(spec, mid, b - a);
  }
  return total;
}

Matrix action_gradient(const LagrangianSpec& spec, const DiscretePath& path) {
  check_path(spec, path);
  const int kk = path.size();
  const Matrix pts = path.points();
  std::vector<SegmentJet> seg;
  seg.reserve(static_cast<std::size_t>(kk + 1));
  for (int k = 0; k <= kk; ++k) seg.push_back(segment_jet(spec, pts, k));
  Matrix grad(kk, path.dim());
  for (int j = 1; j <= kk; ++j) {
    grad.row(j - 1) = gradient_row(seg[static_cast<std::size_t>(j - 1)], seg[static_cast<std::size_t>(j)]).transpose();
  }
  return grad;
}

double reparam_invariance_residual(const LagrangianSpec& spec, const DiscretePath& path,
                                   const Vector& dtau) {
  check_path(spec, path);
  require_dim(dtau.size(), path.size() + 1, "parameter steps");
  if (!(dtau.minCoeff() > 0.0)) throw Error(Errc::OutOfDomain, "parameter steps must be positive");
  const Matrix pts = path.points();
  double total = 0.0;
  for (int k = 0; k + 1 < pts.rows(); ++k) {
    const Vector a = pts.row(k).transpose();
    const Vector b = pts.row(k + 1).transpose();
    total += eval_L(spec, 0.5 * (a + b), (b - a) / dtau(k)) * dtau(k);
  }
  return std::abs(total - discrete_action(spec, path));
}

ExtremizeResult extremize(const LagrangianSpec& spec, const DiscretePath& path0,
                          const ExtremizeOptions& opts) {
  check_path(spec, path0);
  const int kk = path0.size();
  const int n = path0.dim();
  if (!path_valid(spec, path0.points())) {
    // Let discrete_action name the offending segment.
    discrete_action(spec, path0);
    throw Error(Errc::SpacelikeSegment, "initial path has a null segment");
  }

  ExtremizeResult res;
  res.path = path0;
  Vector x = flatten(path0.interior);
  Vector r = flatten(action_gradient(spec, res.path));
  double mu = -1.0;

  while (true) {
    res.grad_norm = r.cwiseAbs().maxCoeff();
    if (res.grad_norm <= opts.grad_tol) {
      res.converged = true;
      break;
    }
    if (res.iterations >= opts.max_iters) {
      res.diagnostic = "no convergence after " + std::to_string(opts.max_iters) +
                       " iterations, |grad S|_inf = " + std::to_string(res.grad_norm);
      break;
    }
    ++res.iterations;

    const Matrix jac = fd_hessian(spec, res.path);
    const Matrix normal = jac.transpose() * jac;
    const Vector rhs = -(jac.transpose() * r);
    if (mu < 0.0) mu = 1e-6 * std::max(normal.diagonal().maxCoeff(), 1e-300);

    bool accepted = false;
    while (mu < 1e20) {
      Matrix damped = normal;
      damped.diagonal().array() += mu;
      const Vector step = damped.ldlt().solve(rhs);
      const Vector x_new = x + step;
      DiscretePath trial{path0.start, path0.end, unflatten(x_new, kk, n)};
      if (!path_valid(spec, trial.points())) {
        mu *= 4.0;
        continue;
      }
      const Vector r_new = flatten(action_gradient(spec, trial));
      if (r_new.squaredNorm() < r.squaredNorm()) {
        x = x_new;
        r = r_new;
        res.path = std::move(trial);
        mu = std::max(mu / 3.0, 1e-300);
        accepted = true;
        break;
      }
      mu *= 4.0;
    }
    if (!accepted) {
      res.grad_norm = r.cwiseAbs().maxCoeff();
      res.diagnostic = "step rejected at maximal damping, |grad S|_inf = " +
                       std::to_string(res.grad_norm);
      break;
    }
  }

  res.action = discrete_action(spec, res.path);
  const Vector eig = Eigen::SelfAdjointEigenSolver<Matrix>(fd_hessian(spec, res.path),
                                                           Eigen::EigenvaluesOnly)
                         .eigenvalues();
  const double largest = eig.cwiseAbs().maxCoeff();
  res.degenerate_modes = static_cast<int>((eig.array().abs() <= opts.degenerate_ratio * largest).count());
  return res;
}

}  // namespace rim
