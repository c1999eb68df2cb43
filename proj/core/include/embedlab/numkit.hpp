#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "embedlab/types.hpp"

namespace embedlab {

/// Eigen-decomposition of a real square matrix in canonical order:
/// descending modulus, then descending real part, then ascending imaginary
/// part. Conjugate pairs sit on adjacent indices (negative imaginary part
/// first) and are exact conjugates of each other, eigenvectors included.
struct Eigendecomposition {
  std::vector<Complex> eigenvalues;
  ComplexMatrix right_eigenvectors;  // unit 2-norm columns
  ComplexMatrix inverse_basis;       // zero-filled when the basis is singular
  double min_pairwise_gap = 0.0;     // +inf for n == 1
  double basis_condition = 1.0;      // 2-norm condition of the basis, +inf if singular
  double residual = 0.0;             // ||A - V diag(l) V^-1|| / ||A|| (Frobenius)
  double source_norm = 0.0;          // ||A||_F
  std::vector<int> conjugate_partner;  // index of the conjugate, -1 for real eigenvalues
  std::vector<int> cluster;            // equal ids <=> eigenvalues closer than distinct_tol (transitively)
  bool repeated = false;               // min_pairwise_gap < distinct_tol
  bool basis_ill_conditioned = false;  // basis_condition above ceiling or residual above recon_tol

  int size() const { return static_cast<int>(eigenvalues.size()); }
  bool ill_conditioned() const { return repeated || basis_ill_conditioned; }
  bool is_real(int i) const { return conjugate_partner[static_cast<std::size_t>(i)] < 0; }
};

Eigendecomposition eig(const RealMatrix& a, const ToleranceConfig& cfg = {});

/// Throws Error(IllConditioned) when the decomposition is flagged repeated or
/// near-defective.
void require_well_conditioned(const Eigendecomposition& e);

/// Matrix exponential by scaling and squaring with Pade approximants of
/// degree 3..13. Throws Error(Overflow) if the result leaves double range.
RealMatrix expm(const RealMatrix& a);

/// V diag(Log l_j + 2 pi i k_j) V^-1. Repeated eigenvalues are accepted only
/// when the basis is well conditioned and offsets are constant on every
/// cluster, i.e. when the result is a primary function of the source.
ComplexMatrix logm_branch(const Eigendecomposition& e, const BranchSelection& sel,
                          const ToleranceConfig& cfg = {});

/// Principal logarithm through the Schur form; valid for defective matrices.
/// Throws SingularMatrix or NegativeRealEigenvalue.
RealMatrix logm_principal(const RealMatrix& a, const ToleranceConfig& cfg = {});

/// Imaginary-part ceiling under which a complex result counts as real:
/// n * entry_tol * (1 + ||Re z||_inf).
double reality_threshold(const ComplexMatrix& z, const ToleranceConfig& cfg);
std::optional<RealMatrix> real_if_real(const ComplexMatrix& z, const ToleranceConfig& cfg);

/// Primary n-th root exp(Log(A) / n).
RealMatrix primary_root(const RealMatrix& a, int n, const ToleranceConfig& cfg = {});

struct PerturbOptions {
  std::optional<bool> keep_stochastic;  // default: keep iff the input is stochastic
  std::uint64_t seed = 0x5eed5eedULL;
  int max_attempts = 32;
};

/// Pattern-preserving perturbation that separates repeated eigenvalues.
/// Returns the input unchanged when its eigenvalues are already distinct.
/// Throws Error(PerturbationFailed) when no admissible sample is found.
RealMatrix perturb_distinct(const RealMatrix& a, const ToleranceConfig& cfg = {},
                            const PerturbOptions& opts = {});

/// ||a - b||_F / ||b||_F (absolute when b is zero).
double relative_error(const RealMatrix& a, const RealMatrix& b);

/// Numerically-zero floor used for determinants and eigenvalue magnitudes.
double numerical_zero(int n, double scale);

}  // namespace embedlab
