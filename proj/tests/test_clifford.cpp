#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rim/clifford.hpp"
#include "rim/errors.hpp"

using namespace rim;

namespace {

using cd = std::complex<double>;

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return Errc::Unsupported;
}

CMatrix identity(int n) { return CMatrix::Identity(n, n); }

}  // namespace

TEST_SUITE("clifford_dirac") {

TEST_CASE("Dirac matrices satisfy the anticommutation relations") {
  const GammaSet mk = build_dirac_gammas(BilinearForm::Minkowski);
  REQUIRE(mk.count() == 4);
  REQUIRE(mk.matrix_size() == 4);
  CHECK((mk.gammas[0] * mk.gammas[0] - identity(4)).norm() == 0.0);
  CHECK((mk.gammas[1] * mk.gammas[1] + identity(4)).norm() == 0.0);
  CHECK(anticommutator_residual(mk) == 0.0);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const CMatrix ac = mk.gammas[static_cast<std::size_t>(a)] * mk.gammas[static_cast<std::size_t>(b)] +
                         mk.gammas[static_cast<std::size_t>(b)] * mk.gammas[static_cast<std::size_t>(a)];
      CHECK((ac - 2.0 * mk.form(a, b) * identity(4)).norm() == 0.0);
    }
  const GammaSet eu = build_dirac_gammas(BilinearForm::Euclidean);
  CHECK(eu.form == Matrix::Identity(4, 4));
  CHECK(anticommutator_residual(eu) == 0.0);
  CHECK(anticommutator_residual(build_pauli_gammas()) == 0.0);
  CHECK(code_of([] { build_dirac_gammas(BilinearForm::Minkowski, 3); }) == Errc::Unsupported);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  CMatrix s(4, 4);
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = cd(n(rng), n(rng));
  CHECK(anticommutator_residual(similarity_transform(mk, s)) <= 1e-11);
}

TEST_CASE("Lorentz generators are the spin matrices") {
  const GammaSet mk = build_dirac_gammas(BilinearForm::Minkowski);
  const LieAlgebraSpec alg = lorentz_algebra(mk.form);
  REQUIRE(alg.generators() == 6);
  CHECK_NOTHROW(alg.validate());
  const RundSolution sol = rund_solve(alg, mk);
  CHECK(sol.max_residual() <= 1e-10);
  CHECK(sol.feasible());
  CHECK(sol.span_rank == 7);
  int i = 0;
  for (int m = 0; m < 4; ++m)
    for (int nu = m + 1; nu < 4; ++nu, ++i) {
      const CMatrix& gm = mk.gammas[static_cast<std::size_t>(m)];
      const CMatrix& gn = mk.gammas[static_cast<std::size_t>(nu)];
      const CMatrix spin = 0.25 * (gm * gn - gn * gm);
      INFO("generator " << alg.names[static_cast<std::size_t>(i)]);
      CHECK((sol.generators[static_cast<std::size_t>(i)] - spin).norm() <= 1e-10);
      CHECK(std::abs(sol.generators[static_cast<std::size_t>(i)].trace()) <= 1e-12);
      CHECK(sol.kernel_dims[static_cast<std::size_t>(i)] == 1);
      CHECK(sol.constrained_kernel_dims[static_cast<std::size_t>(i)] == 0);
    }
  CHECK(verify_lie_closure(sol, alg) <= 1e-10);
  CHECK(vector_covariance_check(sol, alg, mk) <= 1e-10);

  const auto rho = induced_representation(sol, mk);
  for (std::size_t k = 0; k < rho.size(); ++k) CHECK((rho[k] - alg.rho[k]).norm() <= 1e-10);
  CHECK(form_preservation_residual(rho, mk.form) <= 1e-12);
}

TEST_CASE("Euclidean and rotation subalgebras") {
  const GammaSet eu = build_dirac_gammas(BilinearForm::Euclidean);
  const RundSolution so4 = rund_solve(lorentz_algebra(eu.form), eu);
  CHECK(so4.max_residual() <= 1e-10);
  CHECK(verify_lie_closure(so4, lorentz_algebra(eu.form)) <= 1e-10);

  const GammaSet mk = build_dirac_gammas(BilinearForm::Minkowski);
  const LieAlgebraSpec so3 = rotation_algebra(mk.form);
  REQUIRE(so3.generators() == 3);
  const RundSolution rot = rund_solve(so3, mk);
  CHECK(rot.max_residual() <= 1e-10);
  CHECK(verify_lie_closure(rot, so3) <= 1e-10);
  CHECK(form_preservation_residual(so3.rho, mk.form) <= 1e-15);

  const LieAlgebraSpec ab = abelian_algebra(4);
  const RundSolution triv = rund_solve(ab, mk);
  CHECK(triv.max_residual() <= 1e-12);
  CHECK(triv.generators[0].norm() <= 1e-12);
}

TEST_CASE("structure constants are validated") {
  const Matrix form = Vector{{1, -1, -1, -1}}.asDiagonal();
  const LieAlgebraSpec alg = lorentz_algebra(form);
  CHECK(alg.closure_residual() <= 1e-12);
  CHECK(alg.jacobi_residual() <= 1e-12);
  // A pair of matrices whose commutator leaves their span does not close.
  Matrix a = Matrix::Zero(3, 3), b = Matrix::Zero(3, 3);
  a(0, 1) = 1;
  b(1, 2) = 1;
  CHECK_THROWS_AS(LieAlgebraSpec::from_representation({"A", "B"}, {a, b}), Error);
}

TEST_CASE("perturbed gammas admit no exact generators") {
  const GammaSet mk = build_dirac_gammas(BilinearForm::Minkowski);
  const LieAlgebraSpec alg = lorentz_algebra(mk.form);
  std::mt19937_64 rng(12);
  const GammaSet bent = perturb_gamma(mk, 1, 0.1, rng);
  CHECK((bent.gammas[1] - mk.gammas[1]).norm() > 0.0);
  CHECK(rund_solve(alg, bent).max_residual() >= 1e-3);

  std::uniform_int_distribution<int> pick(0, 3);
  int failing = 0;
  for (int t = 0; t < 100; ++t) {
    const double mag = 0.05 + 0.01 * (t % 10);
    const GammaSet g = perturb_gamma(mk, pick(rng), mag, rng);
    if (rund_solve(alg, g).max_residual() >= 1e-4) ++failing;
  }
  CHECK(failing == 100);
  CHECK(code_of([&] { perturb_gamma(mk, 4, 0.1, rng); }) == Errc::OutOfDomain);
}

TEST_CASE("Dirac operator") {
  const GammaSet mk = build_dirac_gammas(BilinearForm::Minkowski);
  const CMatrix rest = dirac_operator(1.0, 2.0, Vector::Zero(4), Vector{{2.0, 0, 0, 0}}, mk);
  CMatrix expect = CMatrix::Zero(4, 4);
  expect(2, 2) = expect(3, 3) = -4.0;
  CHECK((rest - expect).norm() == 0.0);

  const Vector a{{0.1, 0.2, -0.3, 0.4}};
  const Vector p{{1.5, 0.2, 0.1, -0.2}};
  const CMatrix h = dirac_operator(0.5, 1.0, a, p, mk);
  CMatrix manual = -identity(4);
  for (int k = 0; k < 4; ++k) manual += (p(k) - 0.5 * a(k)) * mk.gammas[static_cast<std::size_t>(k)];
  CHECK((h - manual).norm() <= 1e-15);

  const LagrangianSpec spec(0.5, 1.0, MetricField::minkowski(4), VectorPotentialField::constant(a));
  CHECK((dirac_operator(spec, Vector::Zero(4), p, mk) - h).norm() <= 1e-15);
  LagrangianSpec with_extra = spec;
  SymmetricTensorField s3(3, 4);
  s3.set({0, 0, 0}, 1.0);
  with_extra.extras.push_back({1.0, s3});
  CHECK(code_of([&] { dirac_operator(with_extra, Vector::Zero(4), p, mk); }) == Errc::Unsupported);
}

TEST_CASE("determinant reproduces the squared mass shell") {
  const GammaSet mk = build_dirac_gammas(BilinearForm::Minkowski);
  const Vector pi{{1.3, 0.2, -0.4, 0.1}};
  const CMatrix h = dirac_operator(0.0, 1.0, Vector::Zero(4), pi, mk);
  const cd det = oracle::laplace_det(h);
  CHECK(det.real() == doctest::Approx(0.2304).epsilon(1e-12));
  CHECK(std::abs(det.imag()) <= 1e-15);
  CHECK(mass_shell_determinant_residual(0.0, 1.0, Vector::Zero(4), pi, mk) <= 1e-14);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2, 2);
  double worst = 0.0, worst_oracle = 0.0;
  int spacelike = 0;
  for (int t = 0; t < 1000; ++t) {
    const Vector p{{u(rng), u(rng), u(rng), u(rng)}};
    const Vector a{{u(rng), u(rng), u(rng), u(rng)}};
    const double q = u(rng), m = std::abs(u(rng)) + 0.1;
    const Vector k = p - q * a;
    if (k(0) * k(0) < k.tail(3).squaredNorm()) ++spacelike;
    const double scale = std::pow(k.squaredNorm() + m * m, 2);
    worst = std::max(worst, mass_shell_determinant_residual(q, m, a, p, mk) / scale);
    const double shell = k(0) * k(0) - k.tail(3).squaredNorm() - m * m;
    worst_oracle = std::max(worst_oracle, std::abs(oracle::laplace_det(dirac_operator(q, m, a, p, mk)) - shell * shell) / scale);
  }
  CHECK(spacelike > 100);
  CHECK(worst <= 1e-12);
  CHECK(worst_oracle <= 1e-12);

  // On the shell the operator is singular.
  for (int t = 0; t < 100; ++t) {
    const Vector s{{u(rng), u(rng), u(rng)}};
    const double m = std::abs(u(rng)) + 0.1;
    const Vector p{{std::sqrt(m * m + s.squaredNorm()), s(0), s(1), s(2)}};
    const double scale = std::pow(p.squaredNorm() + m * m, 2);
    CHECK(std::abs(oracle::laplace_det(dirac_operator(0.0, m, Vector::Zero(4), p, mk))) / scale <= 1e-12);
  }
}

TEST_CASE("mass term trace identity") {
  const GammaSet mk = build_dirac_gammas(BilinearForm::Minkowski);
  CHECK(mass_term_trace_identity(mk, mk.form) <= 1e-14);
  CHECK(strict_mass_normalization(mk, mk.form) == doctest::Approx(2.0));
  const GammaSet eu = build_dirac_gammas(BilinearForm::Euclidean);
  CHECK(mass_term_trace_identity(eu, Matrix::Identity(4, 4)) <= 1e-14);
  const GammaSet pauli = build_pauli_gammas();
  CHECK(mass_term_trace_identity(pauli, Matrix::Identity(2, 2)) <= 1e-14);
  CHECK(strict_mass_normalization(pauli, Matrix::Identity(2, 2)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(code_of([&] { mass_term_trace_identity(mk, 2.0 * Matrix::Identity(4, 4)); }) == Errc::FormMismatch);
}

}  // TEST_SUITE
