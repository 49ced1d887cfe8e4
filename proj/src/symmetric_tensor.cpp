#include "rim/symmetric_tensor.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "rim/errors.hpp"

namespace rim {

namespace {

double ipow(double base, int exp) {
  double out = 1.0;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

double factorial(int n) {
  double out = 1.0;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

}  // namespace

SymmetricTensorField::SymmetricTensorField(int rank, int dim) : rank_(rank), dim_(dim) {
  if (rank_ < 1 || dim_ < 1) {
    throw Error(Errc::DimensionMismatch, "symmetric tensor needs positive rank and dim");
  }
}

double SymmetricTensorField::multiplicity(const Index& sorted) {
  double denom = 1.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    denom *= factorial(static_cast<int>(j - i));
    i = j;
  }
  return factorial(static_cast<int>(sorted.size())) / denom;
}

SymmetricTensorField SymmetricTensorField::from_polynomial(int rank, int dim,
                                                           const std::map<Index, double>& poly) {
  SymmetricTensorField s(rank, dim);
  for (const auto& [exps, coeff] : poly) {
    require_dim(static_cast<long>(exps.size()), dim, "monomial exponent vector");
    if (std::accumulate(exps.begin(), exps.end(), 0) != rank) {
      throw Error(Errc::DimensionMismatch, "monomial degree differs from tensor rank");
    }
    Index idx;
    for (int a = 0; a < dim; ++a) idx.insert(idx.end(), static_cast<std::size_t>(exps[static_cast<std::size_t>(a)]), a);
    s.entries_[idx] += coeff / multiplicity(idx);
  }
  s.rebuild();
  return s;
}

bool SymmetricTensorField::set(Index indices, double value) {
  require_dim(static_cast<long>(indices.size()), rank_, "symmetric tensor multi-index");
  for (int a : indices) {
    if (a < 0 || a >= dim_) {
      throw Error(Errc::DimensionMismatch,
                  "tensor index " + std::to_string(a) + " outside [0, " + std::to_string(dim_) + ")");
    }
  }
  const bool was_sorted = std::is_sorted(indices.begin(), indices.end());
  std::sort(indices.begin(), indices.end());
  entries_[indices] = value;
  rebuild();
  return !was_sorted;
}

double SymmetricTensorField::get(Index indices) const {
  std::sort(indices.begin(), indices.end());
  auto it = entries_.find(indices);
  return it == entries_.end() ? 0.0 : it->second;
}

void SymmetricTensorField::rebuild() {
  monomials_.clear();
  for (const auto& [idx, value] : entries_) {
    if (value == 0.0) continue;
    Monomial m{std::vector<int>(static_cast<std::size_t>(dim_), 0), value * multiplicity(idx)};
    for (int a : idx) ++m.exponents[static_cast<std::size_t>(a)];
    monomials_.push_back(std::move(m));
  }
}

void SymmetricTensorField::set_modulation(ScalarFn f, ScalarGradFn grad_f) {
  mod_ = std::move(f);
  mod_grad_ = std::move(grad_f);
}

double SymmetricTensorField::modulation(const Vector& x) const { return mod_ ? mod_(x) : 1.0; }

Vector SymmetricTensorField::modulation_gradient(const Vector& x) const {
  if (!mod_) return Vector::Zero(x.size());
  if (mod_grad_) return mod_grad_(x);
  Vector out(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double h = 1e-6 * std::max(1.0, std::abs(x(k)));
    Vector xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    out(k) = (mod_(xp) - mod_(xm)) / (2.0 * h);
  }
  return out;
}

double SymmetricTensorField::contract(const Vector& v) const {
  require_dim(v.size(), dim_, "tensor contraction vector");
  double sum = 0.0;
  for (const auto& m : monomials_) {
    double term = m.weight;
    for (int a = 0; a < dim_; ++a) term *= ipow(v(a), m.exponents[static_cast<std::size_t>(a)]);
    sum += term;
  }
  return sum;
}

Vector SymmetricTensorField::gradient(const Vector& v) const {
  require_dim(v.size(), dim_, "tensor contraction vector");
  Vector g = Vector::Zero(dim_);
  for (const auto& m : monomials_) {
    for (int b = 0; b < dim_; ++b) {
      const int eb = m.exponents[static_cast<std::size_t>(b)];
      if (eb == 0) continue;
      double term = m.weight * eb;
      for (int a = 0; a < dim_; ++a) {
        term *= ipow(v(a), m.exponents[static_cast<std::size_t>(a)] - (a == b ? 1 : 0));
      }
      g(b) += term;
    }
  }
  return g;
}

Matrix SymmetricTensorField::hessian(const Vector& v) const {
  require_dim(v.size(), dim_, "tensor contraction vector");
  Matrix h = Matrix::Zero(dim_, dim_);
  std::vector<int> e(static_cast<std::size_t>(dim_));
  for (const auto& m : monomials_) {
    for (int b = 0; b < dim_; ++b) {
      for (int c = b; c < dim_; ++c) {
        e = m.exponents;
        double term = m.weight;
        term *= e[static_cast<std::size_t>(b)]--;
        if (term == 0.0) continue;
        term *= e[static_cast<std::size_t>(c)]--;
        if (term == 0.0) continue;
        for (int a = 0; a < dim_; ++a) term *= ipow(v(a), e[static_cast<std::size_t>(a)]);
        h(b, c) += term;
        if (c != b) h(c, b) += term;
      }
    }
  }
  return h;
}

double SymmetricTensorField::eval(const Vector& x, const Vector& v) const {
  return modulation(x) * contract(v);
}

}  // namespace rim
