#include "rim/geometry.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "rim/errors.hpp"

namespace rim {

std::string_view to_string(MetricKind kind) noexcept {
  switch (kind) {
    case MetricKind::Constant: return "constant";
    case MetricKind::DiagonalAnalytic: return "diagonal-analytic";
    case MetricKind::UserSupplied: return "user-supplied";
  }
  return "unknown";
}

std::string_view to_string(Causality c) noexcept {
  switch (c) {
    case Causality::NoTimeInfeasible: return "NoTimeInfeasible";
    case Causality::MultiTimeUnbounded: return "MultiTimeUnbounded";
    case Causality::OneTimeBounded: return "OneTimeBounded";
  }
  return "Unknown";
}

namespace {

constexpr double kSymmetryTol = 1e-14;
constexpr double kDetFloor = 1e-12;

void validate_metric(const Matrix& g, int dim) {
  if (g.rows() != dim || g.cols() != dim) {
    throw Error(Errc::DimensionMismatch,
                "metric evaluator returned " + std::to_string(g.rows()) + "x" +
                    std::to_string(g.cols()) + " for dimension " + std::to_string(dim));
  }
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
    throw Error(Errc::DegenerateMetric, "metric is not symmetric");
  }
  if (std::abs(g.determinant()) <= kDetFloor) {
    throw Error(Errc::DegenerateMetric, "metric determinant vanishes");
  }
}

std::vector<Matrix> zero_gradient(int dim) {
  return std::vector<Matrix>(static_cast<std::size_t>(dim), Matrix::Zero(dim, dim));
}

}  // namespace

MetricField::MetricField(int dim, MetricKind kind, Evaluator eval, GradientFn grad)
    : dim_(dim), kind_(kind), eval_(std::move(eval)), grad_(std::move(grad)) {
  if (dim_ < 1) throw Error(Errc::DimensionMismatch, "metric dimension must be positive");
}

MetricField MetricField::minkowski(int dim) {
  Vector d = Vector::Constant(dim, -1.0);
  d(0) = 1.0;
  return diagonal(d);
}

MetricField MetricField::euclidean(int dim) { return diagonal(Vector::Ones(dim)); }

MetricField MetricField::diagonal(const Vector& entries) {
  return constant(entries.asDiagonal().toDenseMatrix());
}

MetricField MetricField::constant(const Matrix& g) {
  const int n = static_cast<int>(g.rows());
  validate_metric(g, n);
  return MetricField(
      n, MetricKind::Constant, [g](const Vector&) { return g; },
      [n](const Vector&) { return zero_gradient(n); });
}

MetricField MetricField::weak_field(int dim, double amplitude, const Vector& wavevector) {
  require_dim(wavevector.size(), dim - 1, "weak-field wavevector");
  auto phase = [wavevector](const Vector& x) {
    return wavevector.dot(x.tail(x.size() - 1));
  };
  ScalarFn phi = [amplitude, phase](const Vector& x) { return amplitude * std::cos(phase(x)); };
  ScalarGradFn grad = [amplitude, phase, wavevector](const Vector& x) {
    Vector out = Vector::Zero(x.size());
    out.tail(x.size() - 1) = -amplitude * std::sin(phase(x)) * wavevector;
    return out;
  };
  return weak_field(dim, std::move(phi), std::move(grad));
}

MetricField MetricField::weak_field(int dim, ScalarFn phi, ScalarGradFn grad_phi) {
  if (dim < 2) throw Error(Errc::DimensionMismatch, "weak-field metric needs dim >= 2");
  Evaluator eval = [dim, phi](const Vector& x) {
    Matrix g = -Matrix::Identity(dim, dim);
    g(0, 0) = 1.0 + 2.0 * phi(x);
    return g;
  };
  GradientFn grad = [dim, grad_phi](const Vector& x) {
    const Vector dphi = grad_phi(x);
    std::vector<Matrix> out = zero_gradient(dim);
    for (int k = 0; k < dim; ++k) out[static_cast<std::size_t>(k)](0, 0) = 2.0 * dphi(k);
    return out;
  };
  return MetricField(dim, MetricKind::DiagonalAnalytic, std::move(eval), std::move(grad));
}

MetricField MetricField::user(int dim, Evaluator eval, GradientFn grad) {
  if (!grad) {
    grad = [dim, eval](const Vector& x) {
      std::vector<Matrix> out;
      out.reserve(static_cast<std::size_t>(dim));
      for (int k = 0; k < dim; ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(x(k)));
        Vector xp = x, xm = x;
        xp(k) += h;
        xm(k) -= h;
        out.push_back((eval(xp) - eval(xm)) / (2.0 * h));
      }
      return out;
    };
  }
  return MetricField(dim, MetricKind::UserSupplied, std::move(eval), std::move(grad));
}

Matrix MetricField::at(const Vector& x) const {
  require_dim(x.size(), dim_, "metric position");
  Matrix g = eval_(x);
  validate_metric(g, dim_);
  return g;
}

std::vector<Matrix> MetricField::gradient(const Vector& x) const {
  require_dim(x.size(), dim_, "metric position");
  return grad_(x);
}

double quadratic_form(const Matrix& g, const Vector& v) {
  if (g.rows() != g.cols()) throw Error(Errc::DimensionMismatch, "metric is not square");
  require_dim(v.size(), g.rows(), "quadratic_form vector");
  return v.dot(g * v);
}

SignatureReport signature(const Matrix& g, double tol) {
  if (g.rows() != g.cols()) throw Error(Errc::DimensionMismatch, "metric is not square");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g);
  SignatureReport rep;
  rep.tolerance = tol;
  rep.eigenvalues = eig.eigenvalues();
  rep.basis = eig.eigenvectors();
  for (Eigen::Index i = 0; i < rep.eigenvalues.size(); ++i) {
    const double lam = rep.eigenvalues(i);
    if (lam > tol) {
      ++rep.n_plus;
    } else if (lam < -tol) {
      ++rep.n_minus;
    } else {
      ++rep.n_zero;
    }
  }
  return rep;
}

CausalityClass causality_class(const SignatureReport& sig) {
  if (sig.n_zero > 0) {
    throw Error(Errc::DegenerateMetric,
                std::to_string(sig.n_zero) + " degenerate direction(s) in the signature");
  }
  CausalityClass out;
  if (sig.n_plus == 0) {
    out.kind = Causality::NoTimeInfeasible;
    return out;
  }
  if (sig.n_plus == 1) {
    out.kind = Causality::OneTimeBounded;
    return out;
  }

  // Two or more time axes. With v^0 = 1 and a second time velocity s, the
  // remaining budget 1 + s^2 - eps can be spent on spatial motion, so the
  // spatial speed is unbounded while g(w,w) = eps * lambda_0 stays >= 0.
  out.kind = Causality::MultiTimeUnbounded;
  CausalityWitness w;
  w.basis = sig.basis;
  const Vector& lam = sig.eigenvalues;
  const int n = static_cast<int>(lam.size());
  // Ascending order: negative axes first, positive axes last.
  w.time_axis = sig.n_minus;
  const int second_time = sig.n_minus + 1;
  const double l0 = lam(w.time_axis);
  w.diagonal = Vector::Zero(n);
  w.diagonal(w.time_axis) = 1.0;
  if (sig.n_minus > 0) {
    constexpr double s = 1.2;
    constexpr double eps = 0.44;
    w.diagonal(second_time) = s * std::sqrt(l0 / lam(second_time));
    const int space_axis = 0;
    w.diagonal(space_axis) = std::sqrt(l0 * (1.0 + s * s - eps) / std::abs(lam(space_axis)));
    w.speed_sq = 0.0;
    for (int i = 0; i < sig.n_minus; ++i) {
      w.speed_sq += std::abs(lam(i)) * w.diagonal(i) * w.diagonal(i) / l0;
    }
  } else {
    constexpr double s = 2.0;
    w.diagonal(second_time) = s * std::sqrt(l0 / lam(second_time));
    w.speed_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i == w.time_axis) continue;
      w.speed_sq += std::abs(lam(i)) * w.diagonal(i) * w.diagonal(i) / l0;
    }
  }
  w.original = sig.basis * w.diagonal;
  w.quadratic_form = (lam.array() * w.diagonal.array().square()).sum();
  out.witness = std::move(w);
  return out;
}

}  // namespace rim
