#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "rim/canonical_lagrangian.hpp"

namespace rim {

using MultiIndex = std::vector<int>;

struct Interval {
  double lo;
  double hi;
};

/// binomial(dimM, D); throws Errc::OutOfDomain unless 1 <= D <= dimM.
int component_count(int target_dim, int brane_dim);

/// Strictly increasing D-subsets of {0..dimM-1} in lexicographic order.
std::vector<MultiIndex> increasing_multi_indices(int target_dim, int brane_dim);

/// Map z (D parameters on a box) -> x (dimM target coordinates), sampled on a
/// regular grid with `points[d]` nodes per axis. Analytic embeddings evaluate
/// the map and its Jacobian anywhere in the box; gridded ones interpolate
/// node values multilinearly and differentiate the interpolant.
class BraneEmbedding {
 public:
  using Map = std::function<Vector(const Vector&)>;
  using JacobianFn = std::function<Matrix(const Vector&)>;

  /// Without `jac` the Jacobian is taken by central differences of `map`.
  static BraneEmbedding analytic(int brane_dim, int target_dim, std::vector<Interval> box,
                                 std::vector<int> points, Map map, JacobianFn jac = {});
  /// `nodes` holds one row per grid node, axis 0 varying fastest.
  static BraneEmbedding gridded(int brane_dim, int target_dim, std::vector<Interval> box,
                                std::vector<int> points, Matrix nodes);
  /// Rows of (z_1..z_D, x_1..x_dimM) in any order forming a full regular grid.
  static BraneEmbedding from_rows(int brane_dim, int target_dim, const Matrix& rows);

  int brane_dim() const noexcept { return brane_dim_; }
  int target_dim() const noexcept { return target_dim_; }
  const std::vector<Interval>& box() const noexcept { return box_; }
  const std::vector<int>& points() const noexcept { return points_; }
  bool is_gridded() const noexcept { return nodes_.size() > 0; }

  bool contains(const Vector& z) const;
  Vector position(const Vector& z) const;
  /// dimM x D matrix dx/dz.
  Matrix jacobian(const Vector& z) const;

  int cell_count() const;
  std::vector<int> cell_multi_index(int cell) const;
  Vector cell_center(int cell) const;
  double cell_volume() const;

 private:
  BraneEmbedding(int brane_dim, int target_dim, std::vector<Interval> box,
                 std::vector<int> points);
  double spacing(int axis) const;
  int node_index(const std::vector<int>& idx) const;

  int brane_dim_;
  int target_dim_;
  std::vector<Interval> box_;
  std::vector<int> points_;
  Map map_;
  JacobianFn jac_;
  Matrix nodes_;
};

/// omega^Gamma: the D x D minors of dx/dz for every increasing Gamma.
struct GeneralizedVelocity {
  std::vector<MultiIndex> indices;
  Vector components;
  Vector z;
};

GeneralizedVelocity generalized_velocity(const BraneEmbedding& emb, const Vector& z);
/// Minors of an explicit dimM x D Jacobian.
Vector jacobian_minors(const Matrix& jac);

/// det [g_{a_i b_j}] for Gamma1 = (a_i), Gamma2 = (b_j).
double multivector_metric(const Matrix& g, const MultiIndex& gamma1, const MultiIndex& gamma2);
/// The full C x C Gram matrix over all increasing multi-indices.
Matrix multivector_metric_matrix(const Matrix& g, int brane_dim);

/// Background covector A_Gamma(x) over the C minors.
class BranePotential {
 public:
  using Evaluator = std::function<Vector(const Vector&)>;

  static BranePotential zero(int components);
  static BranePotential constant(const Vector& a);
  static BranePotential user(int components, Evaluator eval);

  int components() const noexcept { return components_; }
  Vector at(const Vector& x) const;

 private:
  BranePotential(int components, Evaluator eval) : components_(components), eval_(std::move(eval)) {}

  int components_;
  Evaluator eval_;
};

/// q A_Gamma w^Gamma + m sqrt(g_{G1 G2} w^G1 w^G2) + sum_n Q_n root_n(S_n(w,...,w)).
/// Extra tensors act on the C-dimensional minor space.
struct BraneSpec {
  BraneSpec(MetricField g, int brane_dim);

  double charge = 1.0;
  double tension = 1.0;
  int brane_dim;
  MetricField metric;
  BranePotential potential;
  std::vector<ExtraTerm> extras;

  int components() const;
};

/// Lagrangian density at target point x with generalized velocity omega.
double brane_density(const BraneSpec& spec, const Vector& x, const Vector& omega);

/// Midpoint-rule integral of the density over the parameter box. Throws
/// Errc::NegativeRadicand naming the cell where g(w,w) < 0.
double brane_action(const BraneSpec& spec, const BraneEmbedding& emb);

/// max over cell centers of |w^(0..D-1) - 1|: how far the embedding is from
/// the integral gauge x^i = z^i.
double integral_gauge_check(const BraneEmbedding& emb);

struct BraneExpansion {
  double exact;
  double quadratic;
  double spatial_norm;  // Euclidean norm of the non-internal minors
};

/// Cell-center density and its quadratic expansion
/// q A.w + m (1 + 1/2 G_ss(w_s, w_s)) in the integral gauge. Requires the
/// internal minor to be 1 (Errc::GaugeViolation) and a one-time multivector
/// metric with G_00 = 1, G_0s = 0 (Errc::NotOneTime).
BraneExpansion nonrel_brane_expand(const BraneSpec& spec, const BraneEmbedding& emb, int cell);

}  // namespace rim
