#include "rim/clifford.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "rim/errors.hpp"

namespace rim {

using cd = std::complex<double>;

std::string_view to_string(BilinearForm f) noexcept {
  switch (f) {
    case BilinearForm::Minkowski: return "minkowski";
    case BilinearForm::Euclidean: return "euclidean";
  }
  return "unknown";
}

namespace {

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

// Complex s x s matrix as a real vector of length 2 s^2 (real parts, then imaginary).
Vector realify(const CMatrix& m) {
  const Eigen::Index n = m.size();
  Vector out(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out(k) = m(k).real();
    out(n + k) = m(k).imag();
  }
  return out;
}

CMatrix unrealify(const Vector& v, int s) {
  CMatrix m(s, s);
  const Eigen::Index n = m.size();
  for (Eigen::Index k = 0; k < n; ++k) m(k) = cd(v(k), v(n + k));
  return m;
}

int numerical_rank(const Matrix& m, double rel_tol = 1e-10) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return static_cast<int>((s.array() > rel_tol * s(0)).count());
}

CMatrix pauli(int k) {
  CMatrix s(2, 2);
  switch (k) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, cd(0, -1), cd(0, 1), 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

}  // namespace

GammaSet build_dirac_gammas(BilinearForm form, int dim) {
  if (dim != 4) throw Error(Errc::Unsupported, "Dirac gammas are built for dimension 4 only");
  GammaSet gam;
  CMatrix g0 = CMatrix::Zero(4, 4);
  g0.topLeftCorner(2, 2) = CMatrix::Identity(2, 2);
  g0.bottomRightCorner(2, 2) = -CMatrix::Identity(2, 2);
  gam.gammas.push_back(g0);
  for (int k = 1; k <= 3; ++k) {
    CMatrix gk = CMatrix::Zero(4, 4);
    gk.topRightCorner(2, 2) = pauli(k);
    gk.bottomLeftCorner(2, 2) = -pauli(k);
    if (form == BilinearForm::Euclidean) gk *= cd(0, 1);
    gam.gammas.push_back(gk);
  }
  Vector h = Vector::Ones(4);
  if (form == BilinearForm::Minkowski) h.tail(3).setConstant(-1.0);
  gam.form = h.asDiagonal();
  return gam;
}

GammaSet build_pauli_gammas() {
  GammaSet gam;
  gam.gammas = {pauli(1), pauli(2)};
  gam.form = Matrix::Identity(2, 2);
  return gam;
}

double anticommutator_residual(const GammaSet& gam) {
  const int s = gam.matrix_size();
  double worst = 0.0;
  for (int a = 0; a < gam.count(); ++a) {
    for (int b = a; b < gam.count(); ++b) {
      const CMatrix ac = gam.gammas[static_cast<std::size_t>(a)] * gam.gammas[static_cast<std::size_t>(b)] +
                         gam.gammas[static_cast<std::size_t>(b)] * gam.gammas[static_cast<std::size_t>(a)] -
                         2.0 * gam.form(a, b) * CMatrix::Identity(s, s);
      worst = std::max(worst, ac.norm());
    }
  }
  return worst;
}

GammaSet similarity_transform(const GammaSet& gam, const CMatrix& s) {
  const CMatrix inv = s.inverse();
  GammaSet out{{}, gam.form};
  for (const auto& g : gam.gammas) out.gammas.push_back(s * g * inv);
  return out;
}

GammaSet perturb_gamma(const GammaSet& gam, int index, double magnitude, std::mt19937_64& rng) {
  if (index < 0 || index >= gam.count()) throw Error(Errc::OutOfDomain, "gamma index out of range");
  std::normal_distribution<double> normal(0.0, 1.0);
  const int s = gam.matrix_size();
  CMatrix a(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) a(i, j) = cd(normal(rng), normal(rng));
  CMatrix h = 0.5 * (a + a.adjoint());
  h /= Eigen::JacobiSVD<CMatrix>(h).singularValues()(0);
  GammaSet out = gam;
  out.gammas[static_cast<std::size_t>(index)] += magnitude * h;
  return out;
}

// --- Lie algebras -----------------------------------------------------------

LieAlgebraSpec LieAlgebraSpec::from_representation(std::vector<std::string> names,
                                                   std::vector<Matrix> rho) {
  LieAlgebraSpec alg;
  alg.names = std::move(names);
  alg.rho = std::move(rho);
  const int g = alg.generators();
  if (static_cast<int>(alg.names.size()) != g) {
    throw Error(Errc::DimensionMismatch, "generator names and representation differ in count");
  }
  const int n = alg.dim();
  Matrix basis(n * n, g);
  for (int k = 0; k < g; ++k) {
    basis.col(k) = Eigen::Map<const Vector>(alg.rho[static_cast<std::size_t>(k)].data(), n * n);
  }
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(basis);
  alg.structure.assign(static_cast<std::size_t>(g), Matrix::Zero(g, g));
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const Matrix& ri = alg.rho[static_cast<std::size_t>(i)];
      const Matrix& rj = alg.rho[static_cast<std::size_t>(j)];
      const Matrix comm = ri * rj - rj * ri;
      const Vector c = cod.solve(Eigen::Map<const Vector>(comm.data(), n * n));
      for (int k = 0; k < g; ++k) alg.structure[static_cast<std::size_t>(k)](i, j) = c(k);
    }
  }
  alg.validate();
  return alg;
}

double LieAlgebraSpec::closure_residual() const {
  double worst = 0.0;
  const int g = generators();
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const Matrix& ri = rho[static_cast<std::size_t>(i)];
      const Matrix& rj = rho[static_cast<std::size_t>(j)];
      Matrix diff = ri * rj - rj * ri;
      for (int k = 0; k < g; ++k) diff -= structure[static_cast<std::size_t>(k)](i, j) * rho[static_cast<std::size_t>(k)];
      worst = std::max(worst, diff.norm());
    }
  }
  return worst;
}

double LieAlgebraSpec::jacobi_residual() const {
  // C_ij^m C_mk^l + C_jk^m C_mi^l + C_ki^m C_mj^l = 0
  const int g = generators();
  auto c = [this](int i, int j, int k) { return structure[static_cast<std::size_t>(k)](i, j); };
  double worst = 0.0;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j)
      for (int k = 0; k < g; ++k)
        for (int l = 0; l < g; ++l) {
          double sum = 0.0;
          for (int m = 0; m < g; ++m) {
            sum += c(i, j, m) * c(m, k, l) + c(j, k, m) * c(m, i, l) + c(k, i, m) * c(m, j, l);
          }
          worst = std::max(worst, std::abs(sum));
        }
  return worst;
}

void LieAlgebraSpec::validate() const {
  const int g = generators();
  require_dim(static_cast<long>(structure.size()), g, "structure constants");
  for (const auto& r : rho) {
    if (r.rows() != dim() || r.cols() != dim()) {
      throw Error(Errc::DimensionMismatch, "representation matrices differ in size");
    }
  }
  for (const auto& ck : structure) {
    require_dim(ck.rows(), g, "structure constant block");
    if ((ck + ck.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw Error(Errc::OutOfDomain, "structure constants are not antisymmetric");
    }
  }
  if (closure_residual() > 1e-12) {
    throw Error(Errc::OutOfDomain, "representation does not close on the structure constants");
  }
  if (jacobi_residual() > 1e-12) throw Error(Errc::OutOfDomain, "Jacobi identity fails");
}

namespace {

LieAlgebraSpec so_algebra(const Matrix& form, int first) {
  const int n = static_cast<int>(form.rows());
  std::vector<std::string> names;
  std::vector<Matrix> rho;
  for (int m = first; m < n; ++m) {
    for (int nu = m + 1; nu < n; ++nu) {
      Matrix r = Matrix::Zero(n, n);
      for (int a = 0; a < n; ++a) {
        r(m, a) += form(nu, a);
        r(nu, a) -= form(m, a);
      }
      names.push_back("L" + std::to_string(m) + std::to_string(nu));
      rho.push_back(std::move(r));
    }
  }
  return LieAlgebraSpec::from_representation(std::move(names), std::move(rho));
}

}  // namespace

LieAlgebraSpec lorentz_algebra(const Matrix& form) { return so_algebra(form, 0); }

LieAlgebraSpec rotation_algebra(const Matrix& form) { return so_algebra(form, 1); }

LieAlgebraSpec abelian_algebra(int dim) {
  return LieAlgebraSpec::from_representation({"X"}, {Matrix::Zero(dim, dim)});
}

// --- Rund's linear system ---------------------------------------------------

double RundSolution::max_residual() const {
  double worst = 0.0;
  for (double r : residuals) worst = std::max(worst, r);
  return worst;
}

RundSolution rund_solve(const LieAlgebraSpec& alg, const GammaSet& gam) {
  const int n = gam.count();
  const int s = gam.matrix_size();
  require_dim(alg.dim(), n, "representation vs gamma count");

  // Span of the products gamma^a gamma^b in the real matrix space.
  Matrix products(2 * s * s, n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      products.col(a * n + b) = realify(gam.gammas[static_cast<std::size_t>(a)] * gam.gammas[static_cast<std::size_t>(b)]);
  Eigen::JacobiSVD<Matrix> svd(products, Eigen::ComputeThinU);
  const Vector sv = svd.singularValues();
  const int r = sv(0) > 0.0 ? static_cast<int>((sv.array() > 1e-10 * sv(0)).count()) : 0;
  std::vector<CMatrix> basis;
  for (int k = 0; k < r; ++k) basis.push_back(unrealify(svd.matrixU().col(k), s));

  // Columns: [B_k, gamma^a] stacked over a. Rows of the trace constraint below.
  const int rows = n * 2 * s * s;
  Matrix op(rows, r);
  Matrix trace(2, r);
  for (int k = 0; k < r; ++k) {
    for (int a = 0; a < n; ++a) {
      op.block(a * 2 * s * s, k, 2 * s * s, 1) =
          realify(commutator(basis[static_cast<std::size_t>(k)], gam.gammas[static_cast<std::size_t>(a)]));
    }
    const cd tr = basis[static_cast<std::size_t>(k)].trace();
    trace(0, k) = tr.real();
    trace(1, k) = tr.imag();
  }
  Matrix augmented(rows + 2, r);
  augmented << op, trace;
  const int kernel = r - numerical_rank(op);
  const int constrained_kernel = r - numerical_rank(augmented);
  const Eigen::CompleteOrthogonalDecomposition<Matrix> solver(augmented);
  const Eigen::CompleteOrthogonalDecomposition<Matrix> coeff_solver(products);

  RundSolution sol;
  sol.span_rank = r;
  for (int i = 0; i < alg.generators(); ++i) {
    const Matrix& rho = alg.rho[static_cast<std::size_t>(i)];
    Vector target = Vector::Zero(rows + 2);
    for (int a = 0; a < n; ++a) {
      CMatrix want = CMatrix::Zero(s, s);
      for (int b = 0; b < n; ++b) want += rho(b, a) * gam.gammas[static_cast<std::size_t>(b)];
      target.segment(a * 2 * s * s, 2 * s * s) = realify(want);
    }
    const Vector c = r > 0 ? Vector(solver.solve(target)) : Vector();
    CMatrix x = CMatrix::Zero(s, s);
    for (int k = 0; k < r; ++k) x += c(k) * basis[static_cast<std::size_t>(k)];
    const double residual = r > 0 ? (op * c - target.head(rows)).norm() : target.head(rows).norm();

    const Vector flat = coeff_solver.solve(realify(x));
    Matrix coeffs(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) coeffs(a, b) = flat(a * n + b);

    sol.coefficients.push_back(std::move(coeffs));
    sol.generators.push_back(std::move(x));
    sol.residuals.push_back(residual);
    sol.kernel_dims.push_back(kernel);
    sol.constrained_kernel_dims.push_back(constrained_kernel);
  }
  return sol;
}

double verify_lie_closure(const RundSolution& sol, const LieAlgebraSpec& alg) {
  const int g = alg.generators();
  require_dim(static_cast<long>(sol.generators.size()), g, "solution generators");
  double worst = 0.0;
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      CMatrix diff = commutator(sol.generators[static_cast<std::size_t>(i)], sol.generators[static_cast<std::size_t>(j)]);
      for (int k = 0; k < g; ++k) {
        const double c = alg.structure[static_cast<std::size_t>(k)](i, j);
        if (c != 0.0) diff -= c * sol.generators[static_cast<std::size_t>(k)];
      }
      worst = std::max(worst, diff.norm());
    }
  }
  return worst;
}

double vector_covariance_check(const RundSolution& sol, const LieAlgebraSpec& alg,
                               const GammaSet& gam) {
  double worst = 0.0;
  for (int i = 0; i < alg.generators(); ++i) {
    const Matrix& rho = alg.rho[static_cast<std::size_t>(i)];
    for (int a = 0; a < gam.count(); ++a) {
      CMatrix diff = commutator(sol.generators[static_cast<std::size_t>(i)], gam.gammas[static_cast<std::size_t>(a)]);
      for (int b = 0; b < gam.count(); ++b) diff -= rho(b, a) * gam.gammas[static_cast<std::size_t>(b)];
      worst = std::max(worst, diff.norm());
    }
  }
  return worst;
}

std::vector<Matrix> induced_representation(const RundSolution& sol, const GammaSet& gam) {
  const int n = gam.count();
  const int s = gam.matrix_size();
  Matrix span(2 * s * s, n);
  for (int b = 0; b < n; ++b) span.col(b) = realify(gam.gammas[static_cast<std::size_t>(b)]);
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(span);
  std::vector<Matrix> out;
  for (const auto& x : sol.generators) {
    Matrix rho(n, n);
    for (int a = 0; a < n; ++a) {
      rho.col(a) = cod.solve(realify(commutator(x, gam.gammas[static_cast<std::size_t>(a)])));
    }
    out.push_back(std::move(rho));
  }
  return out;
}

double form_preservation_residual(const std::vector<Matrix>& rho, const Matrix& form) {
  double worst = 0.0;
  for (const auto& r : rho) worst = std::max(worst, (r.transpose() * form + form * r).norm());
  return worst;
}

// --- Dirac operator ---------------------------------------------------------

CMatrix dirac_operator(double q, double m, const Vector& a, const Vector& p, const GammaSet& gam) {
  require_dim(a.size(), gam.count(), "vector potential");
  require_dim(p.size(), gam.count(), "momentum");
  const int s = gam.matrix_size();
  CMatrix h = -m * CMatrix::Identity(s, s);
  for (int k = 0; k < gam.count(); ++k) h += (p(k) - q * a(k)) * gam.gammas[static_cast<std::size_t>(k)];
  return h;
}

CMatrix dirac_operator(const LagrangianSpec& spec, const Vector& x, const Vector& p,
                       const GammaSet& gam) {
  if (!spec.extras.empty()) {
    throw Error(Errc::Unsupported, "Dirac operator is defined for electromagnetic and mass terms only");
  }
  return dirac_operator(spec.charge, spec.mass, spec.potential.at(x), p, gam);
}

double mass_shell_determinant_residual(double q, double m, const Vector& a, const Vector& p,
                                       const GammaSet& gam) {
  const Vector pi = p - q * a;
  const double shell = pi.dot(gam.form * pi) - m * m;
  const cd det = dirac_operator(q, m, a, p, gam).determinant();
  return std::abs(det - cd(shell * shell, 0.0));
}

double mass_term_trace_identity(const GammaSet& gam, const Matrix& g) {
  require_dim(g.rows(), gam.count(), "metric");
  if ((g * gam.form - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(Errc::FormMismatch, "metric is not the inverse of the gamma-set form");
  }
  const int s = gam.matrix_size();
  CMatrix sum = CMatrix::Zero(s, s);
  for (int a = 0; a < gam.count(); ++a)
    for (int b = 0; b < gam.count(); ++b)
      if (g(a, b) != 0.0) sum += g(a, b) * gam.gammas[static_cast<std::size_t>(a)] * gam.gammas[static_cast<std::size_t>(b)];
  return (sum - static_cast<double>(gam.count()) * CMatrix::Identity(s, s)).norm();
}

double strict_mass_normalization(const GammaSet& gam, const Matrix& g) {
  mass_term_trace_identity(gam, g);
  return std::sqrt(static_cast<double>(gam.count()));
}

}  // namespace rim
