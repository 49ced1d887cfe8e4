#pragma once

#include <functional>
#include <map>
#include <vector>

#include "rim/linalg.hpp"

namespace rim {

/// Fully symmetric rank-n tensor field S_{a1...an}(x) on an N-dimensional chart.
///
/// Only non-decreasing multi-indices are stored; the contraction
/// S(v,...,v) weights each stored entry by its multinomial multiplicity
/// n! / prod(count_a!), so symmetry holds structurally. Position dependence is
/// an optional positive-or-negative scalar modulation f(x): S(x) = f(x) * S0.
class SymmetricTensorField {
 public:
  using Index = std::vector<int>;
  using ScalarFn = std::function<double(const Vector&)>;
  using ScalarGradFn = std::function<Vector(const Vector&)>;

  SymmetricTensorField(int rank, int dim);

  /// Build from polynomial coefficients: `poly` maps an exponent vector
  /// (length dim, summing to rank) to the coefficient of that monomial in
  /// S(v,...,v). Divides by multiplicities to recover tensor entries.
  static SymmetricTensorField from_polynomial(int rank, int dim,
                                              const std::map<Index, double>& poly);

  int rank() const noexcept { return rank_; }
  int dim() const noexcept { return dim_; }

  /// Sets S_{indices}. Returns true when `indices` had to be sorted.
  bool set(Index indices, double value);
  double get(Index indices) const;
  const std::map<Index, double>& entries() const noexcept { return entries_; }

  void set_modulation(ScalarFn f, ScalarGradFn grad_f);
  bool has_modulation() const noexcept { return static_cast<bool>(mod_); }
  double modulation(const Vector& x) const;
  Vector modulation_gradient(const Vector& x) const;

  /// Constant part S0(v,...,v) and its v-derivatives.
  double contract(const Vector& v) const;
  Vector gradient(const Vector& v) const;
  Matrix hessian(const Vector& v) const;

  /// f(x) * S0(v,...,v)
  double eval(const Vector& x, const Vector& v) const;

  static double multiplicity(const Index& sorted_indices);

 private:
  struct Monomial {
    std::vector<int> exponents;  // length dim
    double weight;               // entry * multiplicity
  };
  void rebuild();

  int rank_;
  int dim_;
  std::map<Index, double> entries_;
  std::vector<Monomial> monomials_;
  ScalarFn mod_;
  ScalarGradFn mod_grad_;
};

}  // namespace rim
