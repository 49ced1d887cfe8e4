#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "rim/linalg.hpp"

namespace rim {

enum class MetricKind { Constant, DiagonalAnalytic, UserSupplied };

std::string_view to_string(MetricKind kind) noexcept;

/// Position-dependent symmetric metric g_ab(x) on an N-dimensional chart.
///
/// Every evaluation is validated: the returned matrix is symmetric to 1e-14
/// and has |det g| > 1e-12, otherwise Errc::DegenerateMetric is thrown.
/// gradient(x)[k] holds the partial derivative of g with respect to x^k.
class MetricField {
 public:
  using Evaluator = std::function<Matrix(const Vector&)>;
  using GradientFn = std::function<std::vector<Matrix>(const Vector&)>;
  using ScalarFn = std::function<double(const Vector&)>;
  using ScalarGradFn = std::function<Vector(const Vector&)>;

  /// diag(1, -1, ..., -1)
  static MetricField minkowski(int dim);
  static MetricField euclidean(int dim);
  static MetricField diagonal(const Vector& entries);
  static MetricField constant(const Matrix& g);

  /// g_00 = 1 + 2 phi(x), g_ii = -1 with phi(x) = amplitude * cos(k . x_space).
  /// `wavevector` has N-1 entries acting on the spatial coordinates.
  static MetricField weak_field(int dim, double amplitude, const Vector& wavevector);
  /// Same family with a caller-provided potential phi and its gradient (N entries).
  static MetricField weak_field(int dim, ScalarFn phi, ScalarGradFn grad_phi);

  /// Arbitrary evaluator. Without a gradient callback the x-derivatives are
  /// taken by central differences of the evaluator.
  static MetricField user(int dim, Evaluator eval, GradientFn grad = {});

  int dim() const noexcept { return dim_; }
  MetricKind kind() const noexcept { return kind_; }
  bool is_constant() const noexcept { return kind_ == MetricKind::Constant; }

  Matrix at(const Vector& x) const;
  std::vector<Matrix> gradient(const Vector& x) const;

 private:
  MetricField(int dim, MetricKind kind, Evaluator eval, GradientFn grad);

  int dim_;
  MetricKind kind_;
  Evaluator eval_;
  GradientFn grad_;
};

struct SignatureReport {
  int n_plus = 0;
  int n_minus = 0;
  int n_zero = 0;
  double tolerance = 0.0;
  /// Eigenvalues in ascending order and the orthogonal matrix whose columns
  /// are the matching eigenvectors (g = Q diag(lambda) Q^T).
  Vector eigenvalues;
  Matrix basis;

  int dim() const noexcept { return n_plus + n_minus + n_zero; }
};

enum class Causality { NoTimeInfeasible, MultiTimeUnbounded, OneTimeBounded };

std::string_view to_string(Causality c) noexcept;

/// A velocity with g(w,w) >= 0 whose spatial speed exceeds one.
///
/// `diagonal` is expressed in the orthonormal eigenframe of g (coordinate order
/// of `basis` columns); `original` = basis * diagonal is the same vector in the
/// chart the metric was given in. `time_axis` is the eigenframe index used as
/// v^0 = 1; speed_sq is sum_i |lambda_i| w_i^2 / lambda_time over the spatial
/// (negative) axes, or over the remaining positive axes when there are none.
struct CausalityWitness {
  Vector diagonal;
  Vector original;
  Matrix basis;
  int time_axis = 0;
  double quadratic_form = 0.0;
  double speed_sq = 0.0;
};

struct CausalityClass {
  Causality kind = Causality::OneTimeBounded;
  std::optional<CausalityWitness> witness;
};

inline constexpr double kDefaultEigenTolerance = 1e-10;

/// v . g . v
double quadratic_form(const Matrix& g, const Vector& v);

SignatureReport signature(const Matrix& g, double tol = kDefaultEigenTolerance);

/// Causal structure implied by the signature. Rejects degenerate metrics
/// (n_zero > 0) with Errc::DegenerateMetric.
CausalityClass causality_class(const SignatureReport& sig);

}  // namespace rim
