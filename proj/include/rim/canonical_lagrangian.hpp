#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "rim/geometry.hpp"
#include "rim/linalg.hpp"
#include "rim/symmetric_tensor.hpp"

namespace rim {

enum class PotentialKind { Zero, Constant, UniformMagnetic, UserSupplied };

std::string_view to_string(PotentialKind kind) noexcept;

/// Covector field A_a(x). jacobian(x)(a, k) = dA_a / dx^k.
class VectorPotentialField {
 public:
  using Evaluator = std::function<Vector(const Vector&)>;
  using JacobianFn = std::function<Matrix(const Vector&)>;

  static VectorPotentialField zero(int dim);
  static VectorPotentialField constant(const Vector& a);
  /// Uniform magnetic field of strength `b` in the (i, j) coordinate plane,
  /// symmetric gauge with lower-index components A_i = b x^j / 2,
  /// A_j = -b x^i / 2. For (i, j) = (1, 2) and signature (+,-,-,-) this is a
  /// field along +x^3.
  static VectorPotentialField uniform_magnetic(int dim, double b, int i, int j);
  /// Without a Jacobian callback the derivatives are central differences.
  static VectorPotentialField user(int dim, Evaluator eval, JacobianFn jac = {});

  int dim() const noexcept { return dim_; }
  PotentialKind kind() const noexcept { return kind_; }

  Vector at(const Vector& x) const;
  Matrix jacobian(const Vector& x) const;

 private:
  VectorPotentialField(int dim, PotentialKind kind, Evaluator eval, JacobianFn jac);

  int dim_;
  PotentialKind kind_;
  Evaluator eval_;
  JacobianFn jac_;
};

/// Q_n * (S_n(v,...,v))^{1/n}; odd ranks use the real signed root.
struct ExtraTerm {
  double coupling;
  SymmetricTensorField tensor;
};

/// L = q A.v + m sqrt(g(v,v)) + sum_n Q_n (S_n(v,...,v))^{1/n}
struct LagrangianSpec {
  explicit LagrangianSpec(MetricField g);
  LagrangianSpec(double q, double m, MetricField g, VectorPotentialField a,
                 std::vector<ExtraTerm> extra = {});

  double charge = 0.0;
  double mass = 0.0;
  MetricField metric;
  VectorPotentialField potential;
  std::vector<ExtraTerm> extras;

  int dim() const noexcept { return metric.dim(); }

  /// Throws on m < 0, mismatched field dimensions, rank < 3 or repeated ranks.
  void validate() const;
};

enum class DerivativeMode { Analytic, FiniteDifference };

inline constexpr double kFiniteDifferenceStep = 1e-5;

/// Real n-th root that keeps the sign for odd n.
double signed_root(double value, int n);

double eval_S(const SymmetricTensorField& s, const Vector& x, const Vector& v);
double eval_L(const LagrangianSpec& spec, const Vector& x, const Vector& v);

/// p split by the term that produced it; total() is the canonical momentum.
struct MomentumTerms {
  Vector electromagnetic;
  Vector mass;
  Vector extra;

  Vector total() const { return electromagnetic + mass + extra; }
};

MomentumTerms momentum_terms(const LagrangianSpec& spec, const Vector& x, const Vector& v);
Vector momentum(const LagrangianSpec& spec, const Vector& x, const Vector& v,
                DerivativeMode mode = DerivativeMode::Analytic);
/// pi = p - qA - (extra-term gradients) = m g v / sqrt(g(v,v))
Vector generalized_momentum(const LagrangianSpec& spec, const Vector& x, const Vector& v);

/// p.v - L
double hamiltonian_residual(const LagrangianSpec& spec, const Vector& x, const Vector& v,
                            DerivativeMode mode = DerivativeMode::Analytic);
/// |p.v - L| / (|p.v| + |L|), or the absolute value when both vanish.
double relative_hamiltonian_residual(const LagrangianSpec& spec, const Vector& x,
                                     const Vector& v,
                                     DerivativeMode mode = DerivativeMode::Analytic);
/// pi g^{-1} pi - m^2
double mass_shell_residual(const LagrangianSpec& spec, const Vector& x, const Vector& v);
/// L(x, lambda v) - lambda L(x, v)
double homogeneity_residual(const LagrangianSpec& spec, const Vector& x, const Vector& v,
                            double lambda);

struct NonrelExpansion {
  double exact;
  double quadratic;
};

/// Coordinate-time gauge v = (1, omega). Requires a diagonal one-time metric
/// with g_00 = 1 at x. Extra rank-n terms are not expanded: their exact value
/// is carried in both results.
NonrelExpansion nonrel_expand(const LagrangianSpec& spec, const Vector& x,
                              const Vector& omega_space);

/// First and second derivatives of L at (x, v), all analytic:
/// hessian_vv(a, b) = d^2 L / dv^a dv^b, mixed(a, k) = d p_a / d x^k,
/// dL_dx(k) = dL / dx^k.
struct LagrangianJet {
  double value = 0.0;
  Vector p;
  Vector dL_dx;
  Matrix hessian_vv;
  Matrix mixed;
};

LagrangianJet lagrangian_jet(const LagrangianSpec& spec, const Vector& x, const Vector& v);

}  // namespace rim
