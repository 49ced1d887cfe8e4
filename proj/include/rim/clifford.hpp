#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "rim/canonical_lagrangian.hpp"
#include "rim/linalg.hpp"

namespace rim {

enum class BilinearForm { Minkowski, Euclidean };

std::string_view to_string(BilinearForm f) noexcept;

/// N square complex matrices gamma^a and the symmetric form h^{ab} they are
/// meant to represent through {gamma^a, gamma^b} = 2 h^{ab} I.
struct GammaSet {
  std::vector<CMatrix> gammas;
  Matrix form;

  int count() const noexcept { return static_cast<int>(gammas.size()); }
  int matrix_size() const noexcept { return gammas.empty() ? 0 : static_cast<int>(gammas[0].rows()); }
};

/// Dirac representation, gamma^0 = diag(I, -I), gamma^i = [[0, s_i], [-s_i, 0]].
/// The Euclidean set multiplies the spatial matrices by i. Only dim = 4.
GammaSet build_dirac_gammas(BilinearForm form, int dim = 4);
/// 2x2 Euclidean toy set (sigma_1, sigma_2).
GammaSet build_pauli_gammas();

/// max_{a,b} |{g^a, g^b} - 2 h^{ab} I|_F
double anticommutator_residual(const GammaSet& gam);
/// S gamma S^{-1} for every matrix; the form is unchanged.
GammaSet similarity_transform(const GammaSet& gam, const CMatrix& s);
/// gamma^index += magnitude * H with H a random Hermitian of unit operator norm.
GammaSet perturb_gamma(const GammaSet& gam, int index, double magnitude, std::mt19937_64& rng);

/// Lie algebra with structure constants C_ij^k and a vector representation
/// rho. structure[k](i, j) = C_ij^k. The covariance condition used by the
/// solver reads [X_i, gamma^a] = sum_b gamma^b rho_i(b, a), which makes
/// X -> rho a homomorphism for the same C.
struct LieAlgebraSpec {
  std::vector<std::string> names;
  std::vector<Matrix> structure;
  std::vector<Matrix> rho;

  int generators() const noexcept { return static_cast<int>(rho.size()); }
  int dim() const noexcept { return rho.empty() ? 0 : static_cast<int>(rho[0].rows()); }

  /// Derives C from [rho_i, rho_j] = C_ij^k rho_k and validates the result.
  static LieAlgebraSpec from_representation(std::vector<std::string> names, std::vector<Matrix> rho);

  /// Antisymmetry of C, representation closure and Jacobi identity, each to 1e-12.
  void validate() const;
  double closure_residual() const;
  double jacobi_residual() const;
};

/// so over the form h: generators L^{mn}, m < n, with
/// rho(b, a) = delta^m_b h^{na} - delta^n_b h^{ma}.
LieAlgebraSpec lorentz_algebra(const Matrix& form);
/// The spatial generators L^{12}, L^{13}, L^{23} of the same construction.
LieAlgebraSpec rotation_algebra(const Matrix& form);
/// One generator with C = 0 and the trivial representation rho = 0.
LieAlgebraSpec abelian_algebra(int dim);

struct RundSolution {
  /// (x_i)_{ab}, minimal-norm coefficients with X_i = x_ab gamma^a gamma^b.
  std::vector<Matrix> coefficients;
  std::vector<CMatrix> generators;
  /// |[X_i, gamma^a] - gamma^b rho_i(b,a)|_F over all a, per generator.
  std::vector<double> residuals;
  /// Kernel dimension before and after imposing trace(X_i) = 0.
  std::vector<int> kernel_dims;
  std::vector<int> constrained_kernel_dims;
  /// Real dimension of span{gamma^a gamma^b} inside the matrix space.
  int span_rank = 0;

  double max_residual() const;
  bool feasible(double tol = 1e-8) const { return max_residual() <= tol; }
};

RundSolution rund_solve(const LieAlgebraSpec& alg, const GammaSet& gam);

/// max_{i,j} |[X_i, X_j] - C_ij^k X_k|_F
double verify_lie_closure(const RundSolution& sol, const LieAlgebraSpec& alg);
/// max_{i,a} |[X_i, gamma^a] - gamma^b rho_i(b,a)|_F
double vector_covariance_check(const RundSolution& sol, const LieAlgebraSpec& alg,
                               const GammaSet& gam);
/// rho recovered from the solved generators by expanding [X_i, gamma^a] in the gammas.
std::vector<Matrix> induced_representation(const RundSolution& sol, const GammaSet& gam);
/// max_i |rho_i^T h + h rho_i|
double form_preservation_residual(const std::vector<Matrix>& rho, const Matrix& form);

/// H = gamma^a (p_a - q A_a) - m I
CMatrix dirac_operator(double q, double m, const Vector& a, const Vector& p, const GammaSet& gam);
/// Same operator from a spec truncated to the electromagnetic and mass terms;
/// specs with extra tensor terms are rejected with Errc::Unsupported.
CMatrix dirac_operator(const LagrangianSpec& spec, const Vector& x, const Vector& p,
                       const GammaSet& gam);

/// |det H - (pi h pi - m^2)^2| with pi = p - qA.
double mass_shell_determinant_residual(double q, double m, const Vector& a, const Vector& p,
                                       const GammaSet& gam);

/// |g_ab gamma^a gamma^b - N I|_F. Throws Errc::FormMismatch unless g h = I.
double mass_term_trace_identity(const GammaSet& gam, const Matrix& g);
/// sqrt(g_ab gamma^a gamma^b) as a multiple of I, i.e. sqrt(N).
double strict_mass_normalization(const GammaSet& gam, const Matrix& g);

}  // namespace rim
