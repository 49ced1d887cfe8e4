#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rim/canonical_lagrangian.hpp"

namespace rim {

/// One random evaluation point for the Lagrangian property sweeps.
struct SampleDraw {
  LagrangianSpec spec;
  Vector x;
  Vector v;
  double lambda;
};

/// Deterministic generator of random 4-dimensional specs mixing constant,
/// congruence-rotated and weak-field metrics, zero/constant/magnetic
/// potentials, a signed rank-3 term and a positive rank-4 term.
class SpecSampler {
 public:
  explicit SpecSampler(std::uint64_t seed, int dim = 4);

  SampleDraw draw();
  double uniform(double lo, double hi);
  std::mt19937_64& engine() noexcept { return rng_; }

 private:
  MetricField random_metric();
  VectorPotentialField random_potential();
  std::optional<Vector> random_timelike(const LagrangianSpec& spec, const Vector& x);
  std::optional<SampleDraw> try_draw();

  std::mt19937_64 rng_;
  int dim_;
};

/// Sum of absolute term magnitudes |qA.v| + m sqrt(g(v,v)) + sum |Q_n root|,
/// used to normalize residuals that can cancel between terms.
double lagrangian_scale(const LagrangianSpec& spec, const Vector& x, const Vector& v);

struct PropertyResult {
  std::string property;
  int samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Homogeneity, Euler identity (analytic and finite-difference), mass shell,
/// momentum-vs-finite-difference, pi invariance and gauge-shift sweeps.
std::vector<PropertyResult> run_property_sweeps(std::uint64_t seed, int samples);

}  // namespace rim
